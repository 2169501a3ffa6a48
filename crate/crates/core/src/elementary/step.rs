use num_rational::BigRational;
use num_traits::Zero;

use crate::error::IntervalError;
use crate::interval::Interval;
use crate::scalar::{Round, Scalar};

/// The step function `s(x) = a1` for `x > c` and `a2` for `x <= c`, together
/// with the outward slack `delta` allowed when its constants are rounded to
/// representable numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepSpec {
    pub c: BigRational,
    pub a1: BigRational,
    pub a2: BigRational,
    pub delta: BigRational,
}

impl StepSpec {
    pub fn new(
        c: BigRational,
        a1: BigRational,
        a2: BigRational,
        delta: BigRational,
    ) -> Result<Self, IntervalError> {
        if delta < BigRational::zero() {
            return Err(IntervalError::Domain("step slack must be non-negative".into()));
        }
        Ok(StepSpec { c, a1, a2, delta })
    }

    /// Exact value of the step function at `x`.
    pub fn value(&self, x: &BigRational) -> &BigRational {
        if *x > self.c {
            &self.a1
        } else {
            &self.a2
        }
    }

    /// Closest representable interval `[lo, hi]` around `[a, b]` with both
    /// roundings within `delta`.
    pub fn round_hull<T: Scalar>(
        &self,
        a: &BigRational,
        b: &BigRational,
    ) -> Result<Interval<T>, IntervalError> {
        let lo = T::from_rational(a, Round::Down)?;
        let hi = T::from_rational(b, Round::Up)?;
        if a - lo.to_rational() > self.delta || hi.to_rational() - b > self.delta {
            return Err(IntervalError::NotRepresentable(format!(
                "[{a}, {b}] within slack {}",
                self.delta
            )));
        }
        Interval::new(lo, hi)
    }
}

/// The interval extension of a step function:
/// `a2` on intervals left of `c`, `a1` on intervals strictly right of `c`,
/// and the hull of both otherwise, each rounded outward within the slack.
pub fn step_extension<T: Scalar>(spec: &StepSpec, x: &Interval<T>) -> Result<Interval<T>, IntervalError> {
    let c = spec.round_hull::<T>(&spec.c, &spec.c)?;
    if x.le(&c) {
        spec.round_hull(&spec.a2, &spec.a2)
    } else if c.lt(x) {
        spec.round_hull(&spec.a1, &spec.a1)
    } else if spec.a1 <= spec.a2 {
        spec.round_hull(&spec.a1, &spec.a2)
    } else {
        spec.round_hull(&spec.a2, &spec.a1)
    }
}
