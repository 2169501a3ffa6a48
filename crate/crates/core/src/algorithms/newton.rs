use thiserror::Error;

use crate::expr::{differentiate, eval_at, DiffError, EvalContext, EvalError, Expr};
use crate::interval::Interval;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error(transparent)]
    NonDifferentiable(#[from] DiffError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum NewtonOutcome<T> {
    /// `X` contains exactly one zero of `f`, and so did the starting box.
    SolutionFound { enclosure: Interval<T>, iterations: u32 },
    /// The starting box contains no zero.
    NoSolution { iterations: u32 },
    Failure { reason: String, iterations: u32 },
    /// `max_iter` steps ran without a verdict.
    Budget { last: Interval<T>, iterations: u32 },
}

#[derive(Clone, Debug)]
pub struct NewtonOptions<T> {
    pub width_goal: T,
    pub max_iter: u32,
    /// Evaluation context; `var` is rebound on every step.
    pub ctx: EvalContext<T>,
}

/// `N(x, X) = x - f(x) / F'(X)` with `x` the midpoint of `X`.
pub fn newton_operator<T: Scalar>(
    f: &Expr,
    df: &Expr,
    var: &str,
    x: &Interval<T>,
    ctx: &EvalContext<T>,
) -> Result<Interval<T>, EvalError> {
    let d = eval_at(df, ctx, var, x)?;
    if d.contains_zero() {
        return Err(EvalError::Domain {
            node: df.to_string(),
            reason: format!("derivative enclosure {d} contains zero"),
        });
    }
    let mid = Interval::point(x.midpoint());
    let fx = eval_at(f, ctx, var, &mid)?;
    Ok(mid.sub(&fx.div(&d)?)?)
}

/// One-dimensional interval Newton method.
///
/// Iterates `X_{k+1} = X_k ∩ N(x_k, X_k)`. Once some `N ⊆ X_k` the zero is
/// certified and iteration continues until `X` is at most `width_goal` wide
/// or stops shrinking.
pub fn interval_newton<T: Scalar>(
    f: &Expr,
    var: &str,
    x0: &Interval<T>,
    opts: &NewtonOptions<T>,
) -> Result<NewtonOutcome<T>, NewtonError> {
    let df = differentiate(f, var)?;
    let mut x = x0.clone();
    let mut certified = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let n = match newton_operator(f, &df, var, &x, &opts.ctx) {
            Ok(n) => n,
            Err(e) => {
                return Ok(NewtonOutcome::Failure {
                    reason: e.to_string(),
                    iterations,
                })
            }
        };
        iterations += 1;
        certified |= n.subset(&x);
        let Some(next) = x.intersect(&n) else {
            return Ok(NewtonOutcome::NoSolution { iterations });
        };
        let stalled = next == x;
        x = next;
        if certified && (stalled || x.diam() <= opts.width_goal) {
            return Ok(NewtonOutcome::SolutionFound {
                enclosure: x,
                iterations,
            });
        }
        if stalled {
            return Ok(NewtonOutcome::Failure {
                reason: format!("no progress at {x} without an existence proof"),
                iterations,
            });
        }
    }
    Ok(if certified {
        NewtonOutcome::SolutionFound {
            enclosure: x,
            iterations,
        }
    } else {
        NewtonOutcome::Budget { last: x, iterations }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn iv(lo: f64, hi: f64) -> Interval<f64> {
        Interval::new(lo, hi).unwrap()
    }

    fn opts() -> NewtonOptions<f64> {
        NewtonOptions {
            width_goal: 1e-12,
            max_iter: 1000,
            ctx: EvalContext::new(1e-15),
        }
    }

    #[test]
    fn first_step_by_hand() {
        let f = parse("x*x - 2").unwrap();
        let df = differentiate(&f, "x").unwrap();
        let n = newton_operator(&f, &df, "x", &iv(1.0, 2.0), &opts().ctx).unwrap();
        assert_eq!(n, iv(1.375, 1.4375));
    }

    #[test]
    fn trichotomy() {
        let f = parse("x*x - 2").unwrap();
        match interval_newton(&f, "x", &iv(1.0, 2.0), &opts()).unwrap() {
            NewtonOutcome::SolutionFound { enclosure, .. } => {
                assert!(enclosure.contains(&std::f64::consts::SQRT_2));
                assert!(enclosure.diam() <= 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            interval_newton(&f, "x", &iv(2.0, 3.0), &opts()).unwrap(),
            NewtonOutcome::NoSolution { iterations: 1 }
        );
        assert!(matches!(
            interval_newton(&f, "x", &iv(-2.0, 2.0), &opts()).unwrap(),
            NewtonOutcome::Failure { iterations: 0, .. }
        ));
    }

    #[test]
    fn budget_and_step_rejection() {
        let f = parse("x*x - 2").unwrap();
        let mut o = opts();
        o.max_iter = 0;
        assert!(matches!(
            interval_newton(&f, "x", &iv(1.0, 2.0), &o).unwrap(),
            NewtonOutcome::Budget { iterations: 0, .. }
        ));
        let g = parse("step(0, 1, 0; x)").unwrap();
        assert!(interval_newton(&g, "x", &iv(1.0, 2.0), &opts()).is_err());
    }
}
