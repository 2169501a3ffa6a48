//! Exact rational endpoints.
//!
//! Values whose numerator fits in an `i64` and denominator in a `u64` are
//! stored inline and combined with 128-bit integer arithmetic; anything
//! larger spills to a heap-allocated [`BigRational`]. The representation is
//! canonical (lowest terms, positive denominator, inline whenever it fits),
//! so derived equality and hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use super::{parse_rational, Round, Scalar};
use crate::error::{IntervalError, ParseScalarError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: i64, den: u64 },
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (n, d) = if den < 0 {
            (-(num as i128), (den as i128).unsigned_abs())
        } else {
            (num as i128, den as u128)
        };
        Self::from_parts(n, d)
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small { num: n, den: 1 })
    }

    /// Reduces `n / d` (with `d > 0`) to canonical form.
    fn from_parts(n: i128, d: u128) -> Self {
        debug_assert!(d > 0);
        let g = gcd_u128(n.unsigned_abs(), d);
        let (mag, d) = if g > 1 {
            (n.unsigned_abs() / g, d / g)
        } else {
            (n.unsigned_abs(), d)
        };
        let n = if n < 0 { -(mag as i128) } else { mag as i128 };
        match (i64::try_from(n), u64::try_from(d)) {
            (Ok(num), Ok(den)) => Rational(Repr::Small { num, den }),
            _ => Rational(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            )))),
        }
    }

    /// Canonicalizes an already reduced big rational.
    fn from_reduced(q: BigRational) -> Self {
        if let (Some(num), Some(den)) = (q.numer().to_i64(), q.denom().to_u64()) {
            return Rational(Repr::Small { num, den });
        }
        Rational(Repr::Big(Box::new(q)))
    }

    pub fn from_big(q: BigRational) -> Self {
        Self::from_reduced(q)
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(q) => (**q).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(q) => q.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(q) => q.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(q) => q.is_integer(),
        }
    }

    /// `true` when stored without heap allocation.
    pub fn is_inline(&self) -> bool {
        matches!(self.0, Repr::Small { .. })
    }

    fn small(&self) -> Option<(i64, u64)> {
        match self.0 {
            Repr::Small { num, den } => Some((num, den)),
            Repr::Big(_) => None,
        }
    }

    fn big_op(&self, rhs: &Self, f: impl FnOnce(BigRational, BigRational) -> BigRational) -> Self {
        Self::from_reduced(f(self.to_big(), rhs.to_big()))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        if let (Some((a, b)), Some((c, d))) = (self.small(), rhs.small()) {
            if b == d {
                return Self::from_parts(a as i128 + c as i128, b as u128);
            }
            let x = (a as i128).checked_mul(d as i128);
            let y = (c as i128).checked_mul(b as i128);
            if let (Some(x), Some(y)) = (x, y) {
                if let Some(n) = x.checked_add(y) {
                    return Self::from_parts(n, b as u128 * d as u128);
                }
            }
        }
        self.big_op(rhs, |x, y| x + y)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if let (Some((a, b)), Some((c, d))) = (self.small(), rhs.small()) {
            return Self::from_parts(a as i128 * c as i128, b as u128 * d as u128);
        }
        self.big_op(rhs, |x, y| x * y)
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Some((a, b)), Some((c, d))) = (self.small(), rhs.small()) {
            let n = a as i128 * d as i128;
            let m = b as u128 * c.unsigned_abs() as u128;
            return Self::from_parts(if c < 0 { -n } else { n }, m);
        }
        self.big_op(rhs, |x, y| x / y)
    }

    fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => match num.checked_neg() {
                Some(n) => Rational(Repr::Small { num: n, den: *den }),
                None => Self::from_parts(-(*num as i128), *den as u128),
            },
            Repr::Big(q) => Self::from_reduced(-(**q).clone()),
        }
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, den } => BigInt::from((*num as i128).div_euclid(*den as i128)),
            Repr::Big(q) => q.floor().to_integer(),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Some((a, b)), Some((c, d))) = (self.small(), other.small()) {
            return (a as i128 * d as i128).cmp(&(c as i128 * b as i128));
        }
        self.to_big().cmp(&other.to_big())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$imp(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                self.$imp(rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div_ref);

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self.add_ref(&rhs.neg_ref())
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        self.add_ref(&rhs.neg_ref())
    }
}

impl Rem for Rational {
    type Output = Rational;
    fn rem(self, rhs: Rational) -> Rational {
        self.big_op(&rhs, |x, y| x % y)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::from_integer(0)
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::from_integer(1)
    }
}

impl Num for Rational {
    type FromStrRadixErr = ParseScalarError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, ParseScalarError> {
        BigRational::from_str_radix(s, radix)
            .map(Rational::from_reduced)
            .map_err(|_| ParseScalarError(s.to_string()))
    }
}

impl Signed for Rational {
    fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg_ref()
        } else {
            self.clone()
        }
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Rational::zero()
        } else {
            self - other
        }
    }
    fn signum(&self) -> Self {
        match self.cmp(&Rational::zero()) {
            Ordering::Less => Rational::from_integer(-1),
            Ordering::Equal => Rational::zero(),
            Ordering::Greater => Rational::one(),
        }
    }
    fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num > 0,
            Repr::Big(q) => q.is_positive(),
        }
    }
    fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(q) => q.is_negative(),
        }
    }
}

impl ToPrimitive for Rational {
    fn to_i64(&self) -> Option<i64> {
        match self.0 {
            Repr::Small { num, den: 1 } => Some(num),
            _ => None,
        }
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|v| u64::try_from(v).ok())
    }
    fn to_f64(&self) -> Option<f64> {
        match self.0 {
            Repr::Small { num, den } if num.unsigned_abs() < (1 << 53) && den < (1 << 53) => {
                Some(num as f64 / den as f64)
            }
            _ => self.to_big().to_f64(),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational::from_reduced(q)
    }
}

impl From<&Rational> for BigRational {
    fn from(q: &Rational) -> Self {
        q.to_big()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}

impl FromStr for Rational {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Rational::from_reduced)
    }
}

impl Scalar for Rational {
    const NAME: &'static str = "rat";
    const MANTISSA_BITS: Option<u32> = None;

    fn is_valid(&self) -> bool {
        true
    }

    fn add_dir(&self, rhs: &Self, _: Round) -> Result<Self, IntervalError> {
        Ok(self.add_ref(rhs))
    }

    fn sub_dir(&self, rhs: &Self, _: Round) -> Result<Self, IntervalError> {
        Ok(self - rhs)
    }

    fn mul_dir(&self, rhs: &Self, _: Round) -> Result<Self, IntervalError> {
        Ok(self.mul_ref(rhs))
    }

    fn div_dir(&self, rhs: &Self, _: Round) -> Result<Self, IntervalError> {
        if rhs.is_zero() {
            return Err(IntervalError::DivisionByZeroInterval);
        }
        Ok(self.div_ref(rhs))
    }

    fn from_rational(q: &BigRational, _: Round) -> Result<Self, IntervalError> {
        Ok(Rational::from_reduced(q.clone()))
    }

    fn to_rational(&self) -> BigRational {
        self.to_big()
    }

    fn midpoint(a: &Self, b: &Self) -> Self {
        if a == b {
            return a.clone();
        }
        if let (Some((x, p)), Some((y, q))) = (a.small(), b.small()) {
            let n = (x as i128 * q as i128).checked_add(y as i128 * p as i128);
            let d = (p as u128 * q as u128).checked_mul(2);
            if let (Some(n), Some(d)) = (n, d) {
                return Rational::from_parts(n, d);
            }
        }
        a.big_op(b, |x, y| (x + y) / BigInt::from(2))
    }

    fn strictly_between(a: &Self, b: &Self) -> Option<Self> {
        (a < b).then(|| Self::midpoint(a, b))
    }

    fn to_decimal(&self) -> String {
        self.to_string()
    }

    fn parse_repr(text: &str) -> Result<Self, ParseScalarError> {
        text.parse()
    }

    fn small_ratio(&self) -> Option<(i64, u64)> {
        self.small()
    }

    fn from_scaled(mantissa: &BigInt, exp: i64, _: Round) -> Result<Self, IntervalError> {
        if let Some(m) = mantissa.to_i64() {
            if (-126..=0).contains(&exp) {
                return Ok(Rational::from_parts(m as i128, 1u128 << (-exp)));
            }
        }
        Ok(Rational::from_reduced(super::scaled_to_rational(mantissa, exp)))
    }

    fn from_i64(v: i64) -> Result<Self, IntervalError> {
        Ok(Rational::from_integer(v))
    }
}

impl Rational {
    /// Sign of the value as a [`Sign`].
    pub fn sign(&self) -> Sign {
        match self.cmp(&Rational::zero()) {
            Ordering::Less => Sign::Minus,
            Ordering::Equal => Sign::NoSign,
            Ordering::Greater => Sign::Plus,
        }
    }

    /// Reduces with the integer gcd; exposed for callers holding raw parts.
    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Rational::from_reduced(BigRational::new_raw(n, d))
    }
}
