use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::IntervalError;
use crate::scalar::{parse_rational, Round, Scalar};

/// A closed interval `[lo, hi]` with representable endpoints and `lo <= hi`.
///
/// Equality is endpointwise. A degenerate interval `[x, x]` stands for the
/// number `x`.
#[derive(Clone, Debug, PartialEq, Hash)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

/// Outcome of a predicate that may be undefined on its arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Undefined,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Undefined => "undefined",
        })
    }
}

fn pow_dir<T: Scalar>(x: &T, n: u32, dir: Round) -> Result<T, IntervalError> {
    if *x < T::zero() {
        let m = x.abs_value();
        return if n % 2 == 0 {
            pow_dir(&m, n, dir)
        } else {
            Ok(-pow_dir(&m, n, dir.flip())?)
        };
    }
    let mut acc = T::one();
    let mut base = x.clone();
    let mut k = n;
    // Every factor is non-negative, so rounding each product in the same
    // direction keeps the bound.
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul_dir(&base, dir)?;
        }
        k >>= 1;
        if k > 0 {
            base = base.mul_dir(&base, dir)?;
        }
    }
    Ok(acc)
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, IntervalError> {
        if !lo.is_valid() || !hi.is_valid() {
            return Err(IntervalError::NonFinite);
        }
        if lo > hi {
            return Err(IntervalError::InvalidEndpoints {
                lo: lo.to_decimal(),
                hi: hi.to_decimal(),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// The degenerate interval `[x, x]`.
    ///
    /// # Panics
    /// If `x` is not finite.
    pub fn point(x: T) -> Self {
        assert!(x.is_valid(), "interval endpoint must be finite");
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    pub fn one() -> Self {
        Self::point(T::one())
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn into_bounds(self) -> (T, T) {
        (self.lo, self.hi)
    }

    /// Tightest enclosure of the exact rational interval `[lo, hi]`.
    pub fn enclose(lo: &BigRational, hi: &BigRational) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError::InvalidEndpoints {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval {
            lo: T::from_rational(lo, Round::Down)?,
            hi: T::from_rational(hi, Round::Up)?,
        })
    }

    /// Tightest enclosure of a single rational.
    pub fn enclose_point(q: &BigRational) -> Result<Self, IntervalError> {
        Self::enclose(q, q)
    }

    /// Tightest enclosure of a decimal or fraction literal such as `0.1`.
    pub fn from_literal(text: &str) -> Result<Self, IntervalError> {
        let q = parse_rational(text).map_err(|_| IntervalError::Parse(text.trim().to_string()))?;
        Self::enclose_point(&q)
    }

    /// Parses `[a, b]` or a single number, enclosing each endpoint outward.
    pub fn parse(text: &str) -> Result<Self, IntervalError> {
        let (lo, hi) = split_bounds(text)?;
        let lo_q = parse_rational(lo).map_err(|_| IntervalError::Parse(text.trim().to_string()))?;
        let hi_q = parse_rational(hi).map_err(|_| IntervalError::Parse(text.trim().to_string()))?;
        Self::enclose(&lo_q, &hi_q)
    }

    /// Parses `[a, b]` or a single number whose endpoints must be exactly
    /// representable.
    pub fn parse_exact(text: &str) -> Result<Self, IntervalError> {
        let (lo, hi) = split_bounds(text)?;
        let exact = |s: &str| -> Result<T, IntervalError> {
            let q = parse_rational(s).map_err(|_| IntervalError::Parse(text.trim().to_string()))?;
            let x = T::from_rational(&q, Round::Down)?;
            if x.to_rational() == q {
                Ok(x)
            } else {
                Err(IntervalError::NotRepresentable(s.trim().to_string()))
            }
        };
        Self::new(exact(lo)?, exact(hi)?)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&T::zero())
    }

    pub fn to_rationals(&self) -> (BigRational, BigRational) {
        (self.lo.to_rational(), self.hi.to_rational())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, IntervalError> {
        Ok(Interval {
            lo: self.lo.add_dir(&rhs.lo, Round::Down)?,
            hi: self.hi.add_dir(&rhs.hi, Round::Up)?,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, IntervalError> {
        Ok(Interval {
            lo: self.lo.sub_dir(&rhs.hi, Round::Down)?,
            hi: self.hi.sub_dir(&rhs.lo, Round::Up)?,
        })
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, IntervalError> {
        let zero = T::zero();
        let (a1, a2, b1, b2) = (&self.lo, &self.hi, &rhs.lo, &rhs.hi);
        let prod = |x: &T, y: &T, u: &T, v: &T| -> Result<Self, IntervalError> {
            Ok(Interval {
                lo: x.mul_dir(y, Round::Down)?,
                hi: u.mul_dir(v, Round::Up)?,
            })
        };
        if *a1 >= zero {
            if *b1 >= zero {
                prod(a1, b1, a2, b2)
            } else if *b2 <= zero {
                prod(a2, b1, a1, b2)
            } else {
                prod(a2, b1, a2, b2)
            }
        } else if *a2 <= zero {
            if *b1 >= zero {
                prod(a1, b2, a2, b1)
            } else if *b2 <= zero {
                prod(a2, b2, a1, b1)
            } else {
                prod(a1, b2, a1, b1)
            }
        } else if *b1 >= zero {
            prod(a1, b2, a2, b2)
        } else if *b2 <= zero {
            prod(a2, b1, a1, b1)
        } else {
            let lo = T::min_of(&a1.mul_dir(b2, Round::Down)?, &a2.mul_dir(b1, Round::Down)?);
            let hi = T::max_of(&a1.mul_dir(b1, Round::Up)?, &a2.mul_dir(b2, Round::Up)?);
            Ok(Interval { lo, hi })
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZeroInterval);
        }
        let zero = T::zero();
        let (x1, x2, y1, y2) = (&self.lo, &self.hi, &rhs.lo, &rhs.hi);
        let quot = |a: &T, b: &T, c: &T, d: &T| -> Result<Self, IntervalError> {
            Ok(Interval {
                lo: a.div_dir(b, Round::Down)?,
                hi: c.div_dir(d, Round::Up)?,
            })
        };
        if *y1 > zero {
            if *x1 >= zero {
                quot(x1, y2, x2, y1)
            } else if *x2 <= zero {
                quot(x1, y1, x2, y2)
            } else {
                quot(x1, y1, x2, y1)
            }
        } else if *x1 >= zero {
            quot(x2, y2, x1, y1)
        } else if *x2 <= zero {
            quot(x2, y1, x1, y2)
        } else {
            quot(x2, y2, x1, y2)
        }
    }

    /// `X^n` using the exact range of the power function on `X`.
    pub fn pow(&self, n: u32) -> Result<Self, IntervalError> {
        let zero = T::zero();
        if n == 0 {
            return Ok(Self::one());
        }
        if n % 2 == 1 || self.lo >= zero {
            return Ok(Interval {
                lo: pow_dir(&self.lo, n, Round::Down)?,
                hi: pow_dir(&self.hi, n, Round::Up)?,
            });
        }
        if self.hi <= zero {
            return Ok(Interval {
                lo: pow_dir(&self.hi, n, Round::Down)?,
                hi: pow_dir(&self.lo, n, Round::Up)?,
            });
        }
        let m = T::max_of(&self.lo.abs_value(), &self.hi.abs_value());
        Ok(Interval {
            lo: zero,
            hi: pow_dir(&m, n, Round::Up)?,
        })
    }

    /// `X * X * ... * X` with `n` factors, each treated as independent.
    pub fn pow_naive(&self, n: u32) -> Result<Self, IntervalError> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `X̄ < Y̲`.
    pub fn lt(&self, rhs: &Self) -> bool {
        self.hi < rhs.lo
    }

    /// `X̄ <= Y̲`.
    pub fn le(&self, rhs: &Self) -> bool {
        self.hi <= rhs.lo
    }

    /// `X ⊆ Y`.
    pub fn subset(&self, rhs: &Self) -> bool {
        rhs.lo <= self.lo && self.hi <= rhs.hi
    }

    /// Both endpoints of `X` strictly inside `Y`.
    pub fn interior_of(&self, rhs: &Self) -> bool {
        rhs.lo < self.lo && self.hi < rhs.hi
    }

    pub fn left(&self) -> Self {
        Self::point(self.lo.clone())
    }

    pub fn right(&self) -> Self {
        Self::point(self.hi.clone())
    }

    /// The degenerate interval `[m, m]` with `m = max(|X̲|, |X̄|)`.
    pub fn abs(&self) -> Self {
        Self::point(self.mag())
    }

    /// `max(|X̲|, |X̄|)`.
    pub fn mag(&self) -> T {
        T::max_of(&self.lo.abs_value(), &self.hi.abs_value())
    }

    pub fn hull(&self, rhs: &Self) -> Self {
        Interval {
            lo: T::min_of(&self.lo, &rhs.lo),
            hi: T::max_of(&self.hi, &rhs.hi),
        }
    }

    /// `X̄ - X̲` rounded up, saturating at the largest finite value.
    pub fn diam(&self) -> T {
        match self.hi.sub_dir(&self.lo, Round::Up) {
            Ok(d) => d,
            Err(_) => T::greatest().expect("exact backends do not overflow"),
        }
    }

    /// Exact `X̄ - X̲`.
    pub fn diam_exact(&self) -> BigRational {
        self.hi.to_rational() - self.lo.to_rational()
    }

    pub fn midpoint(&self) -> T {
        T::midpoint(&self.lo, &self.hi)
    }

    pub fn bisect(&self) -> Result<(Self, Self), IntervalError> {
        match T::strictly_between(&self.lo, &self.hi) {
            Some(m) => Ok((
                Interval {
                    lo: self.lo.clone(),
                    hi: m.clone(),
                },
                Interval {
                    lo: m,
                    hi: self.hi.clone(),
                },
            )),
            None => Err(IntervalError::NotBisectable),
        }
    }

    /// Set intersection; `None` when the intervals are disjoint.
    pub fn intersect(&self, rhs: &Self) -> Option<Self> {
        let lo = T::max_of(&self.lo, &rhs.lo);
        let hi = T::min_of(&self.hi, &rhs.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn to_repr(&self, with_hex: bool) -> IntervalRepr {
        IntervalRepr {
            lo: self.lo.to_decimal(),
            hi: self.hi.to_decimal(),
            lo_hex: if with_hex { self.lo.to_hex() } else { None },
            hi_hex: if with_hex { self.hi.to_hex() } else { None },
        }
    }

    /// Reads a serialized interval; hexadecimal fields take precedence.
    pub fn from_repr(repr: &IntervalRepr) -> Result<Self, IntervalError> {
        let read = |dec: &str, hex: &Option<String>| -> Result<T, IntervalError> {
            let text = hex.as_deref().unwrap_or(dec);
            T::parse_repr(text).map_err(|e| IntervalError::Parse(e.0))
        };
        Self::new(read(&repr.lo, &repr.lo_hex)?, read(&repr.hi, &repr.hi_hex)?)
    }
}

fn split_bounds(text: &str) -> Result<(&str, &str), IntervalError> {
    let t = text.trim();
    match t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        Some(body) => body
            .split_once(',')
            .ok_or_else(|| IntervalError::Parse(t.to_string())),
        None => Ok((t, t)),
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_decimal(), self.hi.to_decimal())
    }
}

/// Text form of an interval: shortest round-trip decimals, plus optional
/// bit-exact hexadecimal floats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRepr {
    pub lo: String,
    pub hi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo_hex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi_hex: Option<String>,
}

impl<T: Scalar> Serialize for Interval<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_repr(true).serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Interval<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = IntervalRepr::deserialize(d)?;
        Interval::from_repr(&repr).map_err(serde::de::Error::custom)
    }
}

impl<T: Scalar> Interval<T> {
    /// `true` when `self` is the interval `[0, 0]`.
    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    /// `true` when `self` is the interval `[1, 1]`.
    pub fn is_one(&self) -> bool {
        self.lo.is_one() && self.hi.is_one()
    }
}
