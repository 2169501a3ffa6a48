//! Rigorous algorithms built on interval extensions.
//!
//! Everything here takes an interval extension `F` of some real function
//! `f`, meaning `f(X) ⊆ F(X)` for every interval `X` in its domain, and
//! turns it into a guaranteed statement about `f`.

mod brouwer;
mod bsa;
mod itra;
mod kantorovich;
mod newton;

use crate::expr::{eval_at, EvalContext, EvalError, Expr};
use crate::interval::Interval;
use crate::scalar::Scalar;

pub use brouwer::{brouwer_check, BrouwerReport, BrouwerVerdict};
pub use bsa::{bsa_range, modulus_estimate, BsaOutcome, Covering, CoveringError, CoveringRepr, Modulus, Piece};
pub use itra::{itra, ItraError};
pub use kantorovich::{kantorovich_step, KantorovichError, KantorovichReport};
pub use newton::{interval_newton, newton_operator, NewtonError, NewtonOptions, NewtonOutcome};

/// An interval function of one variable.
pub trait IntervalFn<T: Scalar> {
    fn eval(&self, x: &Interval<T>) -> Result<Interval<T>, EvalError>;
}

impl<T, F> IntervalFn<T> for F
where
    T: Scalar,
    F: Fn(&Interval<T>) -> Result<Interval<T>, EvalError>,
{
    fn eval(&self, x: &Interval<T>) -> Result<Interval<T>, EvalError> {
        self(x)
    }
}

/// The natural interval extension of an expression in one variable.
#[derive(Clone, Debug)]
pub struct ExprFn<'a, T> {
    pub expr: &'a Expr,
    pub var: &'a str,
    pub ctx: &'a EvalContext<T>,
}

impl<'a, T: Scalar> ExprFn<'a, T> {
    pub fn new(expr: &'a Expr, var: &'a str, ctx: &'a EvalContext<T>) -> Self {
        ExprFn { expr, var, ctx }
    }
}

impl<T: Scalar> IntervalFn<T> for ExprFn<'_, T> {
    fn eval(&self, x: &Interval<T>) -> Result<Interval<T>, EvalError> {
        eval_at(self.expr, self.ctx, self.var, x)
    }
}
