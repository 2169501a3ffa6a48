use crate::expr::{eval_at, EvalContext, EvalError, Expr};
use crate::interval::Interval;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrouwerVerdict {
    FixedPointExists,
    /// The test did not apply. This never means there is no fixed point.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrouwerReport<T> {
    pub verdict: BrouwerVerdict,
    /// `F(I)`.
    pub image: Interval<T>,
}

/// `f` has a fixed point in `I` when `F(I)` lies strictly inside `I`.
pub fn brouwer_check<T: Scalar>(
    f: &Expr,
    var: &str,
    domain: &Interval<T>,
    ctx: &EvalContext<T>,
) -> Result<BrouwerReport<T>, EvalError> {
    let image = eval_at(f, ctx, var, domain)?;
    let verdict = if image.interior_of(domain) {
        BrouwerVerdict::FixedPointExists
    } else {
        BrouwerVerdict::Inconclusive
    };
    Ok(BrouwerReport { verdict, image })
}
