use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{Expr, Func};
use crate::elementary::{cos_iv, exp_iv, log_iv, sin_iv, sqrt_iv, step_extension, StepSpec};
use crate::error::IntervalError;
use crate::interval::Interval;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: String },
    #[error("overflow in `{node}`")]
    Overflow { node: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    /// An arithmetic failure outside any expression node, from hand-written
    /// interval functions.
    #[error(transparent)]
    Arithmetic(#[from] IntervalError),
}

/// Variable bindings and the width budget for elementary functions.
#[derive(Clone, Debug)]
pub struct EvalContext<T> {
    pub bindings: HashMap<String, Interval<T>>,
    pub tol: T,
    /// Evaluate `x^n` as an `n`-fold product instead of using the exact
    /// range of the power function.
    pub naive_powers: bool,
}

impl<T: Scalar> EvalContext<T> {
    pub fn new(tol: T) -> Self {
        EvalContext {
            bindings: HashMap::new(),
            tol,
            naive_powers: false,
        }
    }

    pub fn bind(mut self, name: &str, value: Interval<T>) -> Self {
        self.bindings.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: Interval<T>) {
        self.bindings.insert(name.to_string(), value);
    }
}

fn lift<T>(node: &Expr, r: Result<T, IntervalError>) -> Result<T, EvalError> {
    r.map_err(|e| match e {
        IntervalError::Overflow => EvalError::Overflow {
            node: node.to_string(),
        },
        IntervalError::Domain(reason) => EvalError::Domain {
            node: node.to_string(),
            reason,
        },
        other => EvalError::Domain {
            node: node.to_string(),
            reason: other.to_string(),
        },
    })
}

/// The natural interval extension: every operation of `e` is replaced by
/// its interval counterpart.
pub fn eval_iv<T: Scalar>(e: &Expr, ctx: &EvalContext<T>) -> Result<Interval<T>, EvalError> {
    go(e, ctx, None)
}

/// [`eval_iv`] with `var` bound to `value`, overriding `ctx`.
pub fn eval_at<T: Scalar>(
    e: &Expr,
    ctx: &EvalContext<T>,
    var: &str,
    value: &Interval<T>,
) -> Result<Interval<T>, EvalError> {
    go(e, ctx, Some((var, value)))
}

type Overlay<'a, T> = Option<(&'a str, &'a Interval<T>)>;

fn go<T: Scalar>(e: &Expr, ctx: &EvalContext<T>, over: Overlay<'_, T>) -> Result<Interval<T>, EvalError> {
    let eval_iv = |a: &Expr, ctx: &EvalContext<T>| go(a, ctx, over);
    match e {
        Expr::Const(q) => lift(e, Interval::enclose_point(q)),
        Expr::Var(v) if over.is_some_and(|(name, _)| name == v) => Ok(over.unwrap().1.clone()),
        Expr::Var(v) => ctx
            .bindings
            .get(v)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(v.clone())),
        Expr::Neg(a) => Ok(eval_iv(a, ctx)?.neg()),
        Expr::Add(a, b) => {
            let (x, y) = (eval_iv(a, ctx)?, eval_iv(b, ctx)?);
            lift(e, x.add(&y))
        }
        Expr::Sub(a, b) => {
            let (x, y) = (eval_iv(a, ctx)?, eval_iv(b, ctx)?);
            lift(e, x.sub(&y))
        }
        Expr::Mul(a, b) => {
            let (x, y) = (eval_iv(a, ctx)?, eval_iv(b, ctx)?);
            lift(e, x.mul(&y))
        }
        Expr::Div(a, b) => {
            let (x, y) = (eval_iv(a, ctx)?, eval_iv(b, ctx)?);
            lift(e, x.div(&y))
        }
        Expr::Pow(a, n) => {
            let x = eval_iv(a, ctx)?;
            if ctx.naive_powers {
                lift(e, x.pow_naive(*n))
            } else {
                lift(e, x.pow(*n))
            }
        }
        Expr::Call(f, a) => {
            let x = eval_iv(a, ctx)?;
            let tol = &ctx.tol;
            lift(
                e,
                match f {
                    Func::Exp => exp_iv(&x, tol),
                    Func::Sin => sin_iv(&x, tol),
                    Func::Cos => cos_iv(&x, tol),
                    Func::Log => log_iv(&x, tol),
                    Func::Sqrt => sqrt_iv(&x, tol),
                },
            )
        }
        Expr::Step { c, a1, a2, arg } => {
            let x = eval_iv(arg, ctx)?;
            let spec = lift(
                e,
                StepSpec::new(c.clone(), a1.clone(), a2.clone(), BigRational::zero()),
            )?;
            lift(e, step_extension(&spec, &x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::scalar::Rational;

    fn f(lo: f64, hi: f64) -> Interval<f64> {
        Interval::new(lo, hi).unwrap()
    }

    fn at(src: &str, x: Interval<f64>) -> Result<Interval<f64>, EvalError> {
        eval_iv(&parse(src).unwrap(), &EvalContext::new(1e-9).bind("x", x))
    }

    #[test]
    fn natural_extension_examples() {
        assert_eq!(at("x*x", f(-1.0, 2.0)).unwrap(), f(-2.0, 4.0));
        assert_eq!(at("x^2", f(-1.0, 2.0)).unwrap(), f(0.0, 4.0));
        assert_eq!(at("x - x", f(0.0, 1.0)).unwrap(), f(-1.0, 1.0));
        assert!(matches!(at("1/x", f(-1.0, 1.0)), Err(EvalError::Domain { .. })));
        assert!(matches!(at("log(x)", f(-1.0, 1.0)), Err(EvalError::Domain { .. })));
        assert_eq!(at("y", f(0.0, 1.0)), Err(EvalError::Unbound("y".into())));
    }

    #[test]
    fn naive_powers_flag() {
        let e = parse("x^2").unwrap();
        let mut ctx = EvalContext::new(1e-9).bind("x", f(-1.0, 2.0));
        ctx.naive_powers = true;
        assert_eq!(eval_iv(&e, &ctx).unwrap(), f(-2.0, 4.0));
    }

    #[test]
    fn literals_enclose_on_floats_and_are_exact_on_rationals() {
        let e = parse("0.1").unwrap();
        let y = eval_iv(&e, &EvalContext::new(1e-9)).unwrap();
        assert!(!y.is_degenerate());
        let r = eval_iv(&e, &EvalContext::new(Rational::new(1, 1000))).unwrap();
        assert_eq!(r, Interval::point(Rational::new(1, 10)));
    }

    #[test]
    fn step_node() {
        assert_eq!(at("step(0.5, 2, 1; x)", f(0.0, 0.25)).unwrap(), f(1.0, 1.0));
        assert_eq!(at("step(0.5, 2, 1; x)", f(0.0, 1.0)).unwrap(), f(1.0, 2.0));
        assert!(at("step(0.1, 2, 1; x)", f(0.0, 1.0)).is_err());
    }
}
