//! Endpoint representations.
//!
//! Every interval endpoint is a value of some [`Scalar`] backend. A backend
//! knows how to perform the four arithmetic operations with a requested
//! rounding direction, how to convert from and to exact rationals, and how to
//! print itself losslessly. Binary floating point (`f64`, `f32`) rounds; the
//! [`Rational`] backend is exact and ignores the direction.

mod float;
mod rational;

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{IntervalError, ParseScalarError};

pub use float::{format_hex, parse_hex};
pub use rational::Rational;

/// Rounding direction for a single endpoint computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Round {
    /// Toward negative infinity (lower endpoints).
    Down,
    /// Toward positive infinity (upper endpoints).
    Up,
}

impl Round {
    pub fn flip(self) -> Self {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// A set of representable numbers with directed-rounding arithmetic.
///
/// Implementations must guarantee that `a.op_dir(b, Round::Down)` is a
/// representable number less than or equal to the exact real result and
/// `Round::Up` one greater than or equal to it. Values are always finite.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Short backend name used in diagnostics and the CLI.
    const NAME: &'static str;

    /// Significand width in bits for floating-point backends; `None` when
    /// arithmetic is exact.
    const MANTISSA_BITS: Option<u32>;

    /// `false` for NaN and infinities.
    fn is_valid(&self) -> bool;

    fn add_dir(&self, rhs: &Self, dir: Round) -> Result<Self, IntervalError>;
    fn sub_dir(&self, rhs: &Self, dir: Round) -> Result<Self, IntervalError>;
    fn mul_dir(&self, rhs: &Self, dir: Round) -> Result<Self, IntervalError>;
    /// `rhs` must be nonzero.
    fn div_dir(&self, rhs: &Self, dir: Round) -> Result<Self, IntervalError>;

    /// The representable number closest to `q` in direction `dir`.
    fn from_rational(q: &BigRational, dir: Round) -> Result<Self, IntervalError>;

    /// Exact value of `self`.
    fn to_rational(&self) -> BigRational;

    /// A representable number in `[a, b]`, as close to `(a + b) / 2` as the
    /// backend allows without overflow.
    fn midpoint(a: &Self, b: &Self) -> Self;

    /// A representable number strictly between `a` and `b`, if one exists.
    fn strictly_between(a: &Self, b: &Self) -> Option<Self>;

    /// Lossless decimal text (shortest round-trip for floats, `p/q` for
    /// rationals).
    fn to_decimal(&self) -> String;

    /// Bit-exact hexadecimal float text, where the backend has one.
    fn to_hex(&self) -> Option<String> {
        None
    }

    /// Parses text produced by [`Scalar::to_decimal`] or [`Scalar::to_hex`].
    /// Floats round decimal input to nearest; use
    /// [`crate::Interval::from_literal`] for an enclosing conversion.
    fn parse_repr(text: &str) -> Result<Self, ParseScalarError>;

    /// Numerator and denominator when both fit in machine words.
    fn small_ratio(&self) -> Option<(i64, u64)> {
        None
    }

    /// `mantissa * 2^exp` rounded in direction `dir`.
    fn from_scaled(mantissa: &BigInt, exp: i64, dir: Round) -> Result<Self, IntervalError> {
        let q = scaled_to_rational(mantissa, exp);
        Self::from_rational(&q, dir)
    }

    fn from_i64(v: i64) -> Result<Self, IntervalError> {
        let q = BigRational::from_integer(BigInt::from(v));
        let lo = Self::from_rational(&q, Round::Down)?;
        if lo.to_rational() == q {
            Ok(lo)
        } else {
            Err(IntervalError::NotRepresentable(v.to_string()))
        }
    }

    /// Largest finite value, for backends that have one.
    fn greatest() -> Option<Self> {
        None
    }

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if b < a {
            b.clone()
        } else {
            a.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if b > a {
            b.clone()
        } else {
            a.clone()
        }
    }
}

pub(crate) fn scaled_to_rational(mantissa: &BigInt, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(mantissa << (exp as usize))
    } else {
        BigRational::new(mantissa.clone(), BigInt::one() << ((-exp) as usize))
    }
}

/// Parses a decimal literal (`12`, `-0.375`, `1.5e-3`) or a fraction
/// (`3/8`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseScalarError> {
    let t = text.trim();
    let err = || ParseScalarError(t.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = body[i + 1..].parse().map_err(|_| err())?;
            (&body[..i], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| err())?);
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(err());
    }
    let ten = BigInt::from(10u32);
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= BigRational::from_integer(factor);
    } else {
        value /= BigRational::from_integer(factor);
    }
    Ok(if negative { -value } else { value })
}

/// Exact decimal expansion of `q` if its denominator has only factors 2 and 5.
pub fn terminating_decimal(q: &BigRational) -> Option<String> {
    let mut den = q.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = q.numer() * num_traits::pow(BigInt::from(10u32), places) / q.denom();
    let negative = scaled < BigInt::zero();
    let digits = scaled.magnitude().to_string();
    let body = if places == 0 {
        digits
    } else if digits.len() > places {
        let (i, f) = digits.split_at(digits.len() - places);
        format!("{i}.{f}")
    } else {
        format!("0.{}{}", "0".repeat(places - digits.len()), digits)
    };
    Some(if negative { format!("-{body}") } else { body })
}
