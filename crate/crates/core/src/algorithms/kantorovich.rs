use thiserror::Error;

use crate::elementary::sqrt_iv;
use crate::error::IntervalError;
use crate::expr::{differentiate, eval_at, DiffError, EvalContext, EvalError, Expr};
use crate::interval::Interval;
use crate::scalar::{Round, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KantorovichError {
    #[error("derivative vanishes or may vanish at the iterate")]
    SingularDerivative,
    #[error(transparent)]
    NonDifferentiable(#[from] DiffError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Newton–Kantorovich data at one iterate. All of `eta`, `k`, `h` and `r`
/// are upper bounds of the exact quantities.
#[derive(Clone, Debug, PartialEq)]
pub struct KantorovichReport<T> {
    /// `|f(x) / f'(x)|`.
    pub eta: T,
    /// `sup |f''(y) / f'(x)|` over `|y - x| <= eps`.
    pub k: T,
    pub h: T,
    /// Radius of the ball around `x` holding the root; `None` when
    /// `h >= 1/2`.
    pub r: Option<T>,
    pub satisfied: bool,
    /// The classical Newton step `x - f(x) / f'(x)`.
    pub iterate: T,
}

/// Evaluates the Kantorovich stopping test for Newton's method at `x`.
pub fn kantorovich_step<T: Scalar>(
    f: &Expr,
    var: &str,
    x: &T,
    eps: &T,
    ctx: &EvalContext<T>,
) -> Result<KantorovichReport<T>, KantorovichError> {
    let df = differentiate(f, var)?;
    let d2f = differentiate(&df, var)?;
    let at = Interval::point(x.clone());
    let fx = eval_at(f, ctx, var, &at)?;
    let dfx = eval_at(&df, ctx, var, &at)?;
    if dfx.contains_zero() {
        return Err(KantorovichError::SingularDerivative);
    }
    let step = fx.div(&dfx)?;
    let eta = step.mag();
    let ball = Interval::new(x.sub_dir(eps, Round::Down)?, x.add_dir(eps, Round::Up)?)?;
    let k = eval_at(&d2f, ctx, var, &ball)?.div(&dfx)?.mag();
    let h = k.mul_dir(&eta, Round::Up)?;
    let two = T::one() + T::one();
    let half = T::one().div_dir(&two, Round::Down)?;
    let r = if h < half {
        // r = 2η / (1 + √(1 - 2h)), rounded up via a lower bound of the root.
        let inner = T::one().sub_dir(&two.mul_dir(&h, Round::Up)?, Round::Down)?;
        let root = sqrt_iv(&Interval::point(inner), &ctx.tol)?;
        let den = T::one().add_dir(root.lo(), Round::Down)?;
        Some(two.mul_dir(&eta, Round::Up)?.div_dir(&den, Round::Up)?)
    } else {
        None
    };
    let satisfied = r.as_ref().is_some_and(|r| r <= eps);
    let iterate = at.sub(&step)?.midpoint();
    Ok(KantorovichReport {
        eta,
        k,
        h,
        r,
        satisfied,
        iterate,
    })
}
