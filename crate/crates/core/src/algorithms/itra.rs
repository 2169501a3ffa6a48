use thiserror::Error;

use super::IntervalFn;
use crate::error::IntervalError;
use crate::expr::EvalError;
use crate::interval::Interval;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ItraError {
    #[error("integration bounds must satisfy a < b")]
    EmptyRange,
    #[error("number of subintervals must be at least 1")]
    NoSubintervals,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Interval trapezoidal rule: an interval `J` with `∫_a^b f ∈ J`.
///
/// Splits `[a, b]` into `n` equal parts and returns `h · Σ F([x_{i-1}, x_i])`.
/// When `h` or the grid points are not representable, each piece is widened
/// to the tightest representable interval around the exact one, so the
/// result stays an enclosure.
pub fn itra<T: Scalar>(f: &impl IntervalFn<T>, a: &T, b: &T, n: u64) -> Result<Interval<T>, ItraError> {
    if a >= b {
        return Err(ItraError::EmptyRange);
    }
    if n == 0 {
        return Err(ItraError::NoSubintervals);
    }
    let count = i64::try_from(n).map_err(|_| IntervalError::Overflow)?;
    let a_iv = Interval::point(a.clone());
    let h = Interval::point(b.clone())
        .sub(&a_iv)?
        .div(&Interval::point(T::from_i64(count)?))?;
    let grid = |i: i64| -> Result<Interval<T>, IntervalError> {
        if i == 0 {
            return Ok(a_iv.clone());
        }
        if i == count {
            return Ok(Interval::point(b.clone()));
        }
        a_iv.add(&h.mul(&Interval::point(T::from_i64(i)?))?)
    };
    let mut sum = Interval::zero();
    let mut left = grid(0)?;
    for i in 1..=count {
        let right = grid(i)?;
        let piece = Interval::new(left.lo().clone(), right.hi().clone())?;
        sum = sum.add(&f.eval(&piece)?)?;
        left = right;
    }
    Ok(h.mul(&sum)?)
}
