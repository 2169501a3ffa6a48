//! IEEE binary floating-point backends with directed rounding.
//!
//! Every operation computes the round-to-nearest result and then recovers the
//! exact rounding error with an error-free transformation (two-sum for
//! addition, a fused multiply-add residual for multiplication and division).
//! The sign of that error tells whether the nearest result already lies on
//! the requested side; if not, it is moved one representable number outward.
//! Near the underflow threshold the residual may itself be inexact, so there
//! the result is moved outward unconditionally.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Round, Scalar};
use crate::error::{IntervalError, ParseScalarError};

macro_rules! float_backend {
    ($t:ident, $m:ident, $mant:expr, $frac_bits:expr, $bias:expr, $name:expr) => {
        impl Scalar for $t {
            const NAME: &'static str = $name;
            const MANTISSA_BITS: Option<u32> = Some($mant);

            fn is_valid(&self) -> bool {
                self.is_finite()
            }

            fn add_dir(&self, rhs: &Self, dir: Round) -> Result<Self, IntervalError> {
                let (a, b) = (*self, *rhs);
                let s = a + b;
                if !s.is_finite() {
                    return Err(IntervalError::Overflow);
                }
                let bb = s - a;
                let err = (a - (s - bb)) + (b - bb);
                if !err.is_finite() {
                    return $m::step(s, dir);
                }
                $m::settle(s, err, dir)
            }

            fn sub_dir(&self, rhs: &Self, dir: Round) -> Result<Self, IntervalError> {
                self.add_dir(&-*rhs, dir)
            }

            fn mul_dir(&self, rhs: &Self, dir: Round) -> Result<Self, IntervalError> {
                let (a, b) = (*self, *rhs);
                if a == 0.0 || b == 0.0 {
                    return Ok(0.0);
                }
                let p = a * b;
                if !p.is_finite() {
                    return Err(IntervalError::Overflow);
                }
                let positive = (a > 0.0) == (b > 0.0);
                if p == 0.0 {
                    return Ok($m::underflowed(positive, dir));
                }
                if p.abs() < $m::tiny() {
                    return $m::step(p, dir);
                }
                $m::settle(p, a.mul_add(b, -p), dir)
            }

            fn div_dir(&self, rhs: &Self, dir: Round) -> Result<Self, IntervalError> {
                let (a, b) = (*self, *rhs);
                if b == 0.0 {
                    return Err(IntervalError::DivisionByZeroInterval);
                }
                if a == 0.0 {
                    return Ok(0.0);
                }
                let q = a / b;
                if !q.is_finite() {
                    return Err(IntervalError::Overflow);
                }
                let positive = (a > 0.0) == (b > 0.0);
                if q == 0.0 {
                    return Ok($m::underflowed(positive, dir));
                }
                if q.abs() < $m::tiny() || a.abs() < $m::tiny() {
                    return $m::step(q, dir);
                }
                // a = q*b + r exactly, so a/b = q + r/b.
                let r = (-q).mul_add(b, a);
                let err = if r == 0.0 {
                    0.0
                } else if (r > 0.0) == (b > 0.0) {
                    1.0
                } else {
                    -1.0
                };
                $m::settle(q, err, dir)
            }

            fn from_rational(q: &BigRational, dir: Round) -> Result<Self, IntervalError> {
                if q.is_zero() {
                    return Ok(0.0);
                }
                let approx = q.to_f64().unwrap_or(f64::NAN) as $t;
                let mut x = if approx.is_nan() {
                    0.0
                } else if approx.is_infinite() {
                    $t::MAX.copysign(approx)
                } else {
                    approx
                };
                loop {
                    let exact = $m::exact_of(x);
                    match dir {
                        Round::Down => {
                            if &exact > q {
                                x = x.next_down();
                                if !x.is_finite() {
                                    return Err(IntervalError::Overflow);
                                }
                                continue;
                            }
                            let next = x.next_up();
                            if next.is_finite() && &$m::exact_of(next) <= q {
                                x = next;
                                continue;
                            }
                        }
                        Round::Up => {
                            if &exact < q {
                                x = x.next_up();
                                if !x.is_finite() {
                                    return Err(IntervalError::Overflow);
                                }
                                continue;
                            }
                            let prev = x.next_down();
                            if prev.is_finite() && &$m::exact_of(prev) >= q {
                                x = prev;
                                continue;
                            }
                        }
                    }
                    return Ok(x + 0.0);
                }
            }

            fn greatest() -> Option<Self> {
                Some($t::MAX)
            }

            fn to_rational(&self) -> BigRational {
                $m::exact_of(*self)
            }

            fn midpoint(a: &Self, b: &Self) -> Self {
                if a == b {
                    return *a;
                }
                let m = *a / 2.0 + *b / 2.0;
                m.clamp(*a, *b) + 0.0
            }

            fn strictly_between(a: &Self, b: &Self) -> Option<Self> {
                let m = <Self as Scalar>::midpoint(a, b);
                if *a < m && m < *b {
                    return Some(m);
                }
                let up = a.next_up();
                (up < *b).then_some(up)
            }

            fn to_decimal(&self) -> String {
                let x = *self + 0.0;
                let plain = format!("{x}");
                if plain.len() <= 21 {
                    plain
                } else {
                    format!("{x:e}")
                }
            }

            fn to_hex(&self) -> Option<String> {
                let bits = self.to_bits() as u64;
                let total = std::mem::size_of::<$t>() as u32 * 8;
                let sign = bits >> (total - 1) == 1;
                let biased = ((bits >> $frac_bits) & ((1u64 << (total - 1 - $frac_bits)) - 1)) as i64;
                let frac = bits & ((1u64 << $frac_bits) - 1);
                Some(format_hex(sign, biased, frac, $frac_bits, $bias))
            }

            fn parse_repr(text: &str) -> Result<Self, ParseScalarError> {
                let t = text.trim();
                let err = || ParseScalarError(t.to_string());
                if t.contains("0x") || t.contains("0X") {
                    let q = parse_hex(t).ok_or_else(err)?;
                    let x = Self::from_rational(&q, Round::Down).map_err(|_| err())?;
                    return if $m::exact_of(x) == q { Ok(x) } else { Err(err()) };
                }
                let x: $t = t.parse().map_err(|_| err())?;
                if x.is_finite() {
                    Ok(x + 0.0)
                } else {
                    Err(err())
                }
            }

            fn small_ratio(&self) -> Option<(i64, u64)> {
                let (m, e) = decompose(*self as f64);
                if m == 0 {
                    return Some((0, 1));
                }
                if e >= 0 {
                    let v = (m as i128).checked_shl(e as u32)?;
                    return (e < 64).then_some(())
                        .and_then(|_| i64::try_from(v).ok())
                        .map(|v| (v, 1));
                }
                let tz = m.unsigned_abs().trailing_zeros() as i64;
                let shift = tz.min(-e);
                let (m, e) = (m >> shift, e + shift);
                (e > -64).then(|| (m, 1u64 << (-e)))
            }

            fn from_scaled(mantissa: &BigInt, exp: i64, dir: Round) -> Result<Self, IntervalError> {
                if mantissa.bits() <= $mant as u64 {
                    let m = mantissa.to_i64().unwrap_or(0) as $t;
                    if (-(($bias) as i64) + 1..=($bias) as i64).contains(&exp) {
                        let v = m * (2.0 as $t).powi(exp as i32);
                        if v.is_finite() && (v == 0.0) == mantissa.is_zero() && v.abs() >= $t::MIN_POSITIVE {
                            return Ok(v);
                        }
                    }
                }
                Self::from_rational(&super::scaled_to_rational(mantissa, exp), dir)
            }
        }

        mod $m {
            use super::*;

            pub(super) fn tiny() -> $t {
                (2.0 as $t).powi($t::MIN_EXP + 2 * $mant as i32)
            }

            pub(super) fn step(v: $t, dir: Round) -> Result<$t, IntervalError> {
                let w = match dir {
                    Round::Down => v.next_down(),
                    Round::Up => v.next_up(),
                };
                if w.is_finite() {
                    Ok(w + 0.0)
                } else {
                    Err(IntervalError::Overflow)
                }
            }

            /// `v` is the nearest result and `err` has the sign of
            /// `exact - v`.
            pub(super) fn settle(v: $t, err: $t, dir: Round) -> Result<$t, IntervalError> {
                match dir {
                    Round::Down if err < 0.0 => step(v, dir),
                    Round::Up if err > 0.0 => step(v, dir),
                    _ => Ok(v + 0.0),
                }
            }

            /// The exact result is a nonzero number that rounded to zero.
            pub(super) fn underflowed(positive: bool, dir: Round) -> $t {
                let tiny = (0.0 as $t).next_up();
                match (positive, dir) {
                    (true, Round::Up) => tiny,
                    (false, Round::Down) => -tiny,
                    _ => 0.0,
                }
            }

            pub(super) fn exact_of(x: $t) -> BigRational {
                BigRational::from_float(x).expect("finite scalar")
            }
        }
    };
}

float_backend!(f64, f64_ops, 53, 52, 1023, "f64");
float_backend!(f32, f32_ops, 24, 23, 127, "f32");

fn decompose(x: f64) -> (i64, i64) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), biased - 1075)
    };
    (sign * m, e)
}

/// Formats an IEEE value given by its fields as `[-]0x1.<hex>p<exp>`.
pub fn format_hex(sign: bool, biased_exp: i64, frac: u64, frac_bits: u32, bias: i64) -> String {
    let s = if sign { "-" } else { "" };
    if biased_exp == 0 && frac == 0 {
        return format!("{s}0x0p+0");
    }
    let pad = (4 - frac_bits % 4) % 4;
    let digits = (frac_bits + pad) / 4;
    let mut hex = format!("{:0width$x}", frac << pad, width = digits as usize);
    while hex.ends_with('0') {
        hex.pop();
    }
    let (lead, exp) = if biased_exp == 0 {
        ('0', 1 - bias)
    } else {
        ('1', biased_exp - bias)
    };
    let dot = if hex.is_empty() { String::new() } else { format!(".{hex}") };
    format!("{s}0x{lead}{dot}p{exp:+}")
}

/// Parses `[-]0x<hex>[.<hex>]p<exp>` into its exact rational value.
pub fn parse_hex(text: &str) -> Option<BigRational> {
    let t = text.trim();
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let body = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X"))?;
    let (mant, exp) = body.split_once(['p', 'P'])?;
    let exp: i64 = exp.parse().ok()?;
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let m = BigInt::parse_bytes(digits.as_bytes(), 16)?;
    let e = exp - 4 * frac_part.len() as i64;
    if e.abs() > 20_000 {
        return None;
    }
    let q = super::scaled_to_rational(&m, e);
    Some(if negative { -q } else { q })
}
