use num_rational::BigRational;
use thiserror::Error;

use super::{Expr, Func};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("`{0}` is not differentiable")]
    NonDifferentiable(String),
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn fold(a: &Expr, c: &Expr, op: impl Fn(BigRational, BigRational) -> BigRational) -> Option<Expr> {
    Some(Expr::constant(op(a.as_constant()?, c.as_constant()?)))
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Neg(inner) => *inner,
        a if a.is_zero() => Expr::int(0),
        a => Expr::Neg(b(a)),
    }
}

fn add(x: Expr, y: Expr) -> Expr {
    if x.is_zero() {
        return y;
    }
    if y.is_zero() {
        return x;
    }
    if let Some(c) = fold(&x, &y, |p, q| p + q) {
        return c;
    }
    if x == y {
        return mul(Expr::int(2), x);
    }
    if let Expr::Neg(inner) = y {
        return sub(x, *inner);
    }
    Expr::Add(b(x), b(y))
}

fn sub(x: Expr, y: Expr) -> Expr {
    if y.is_zero() {
        return x;
    }
    if x.is_zero() {
        return neg(y);
    }
    if let Some(c) = fold(&x, &y, |p, q| p - q) {
        return c;
    }
    if x == y {
        return Expr::int(0);
    }
    Expr::Sub(b(x), b(y))
}

fn mul(x: Expr, y: Expr) -> Expr {
    if x.is_zero() || y.is_zero() {
        return Expr::int(0);
    }
    if x.is_one() {
        return y;
    }
    if y.is_one() {
        return x;
    }
    if let Some(c) = fold(&x, &y, |p, q| p * q) {
        return c;
    }
    match (x, y) {
        (Expr::Neg(p), q) => neg(mul(*p, q)),
        (p, Expr::Neg(q)) => neg(mul(p, *q)),
        (p, q) => Expr::Mul(b(p), b(q)),
    }
}

fn div(x: Expr, y: Expr) -> Expr {
    if x.is_zero() {
        return Expr::int(0);
    }
    if y.is_one() {
        return x;
    }
    Expr::Div(b(x), b(y))
}

fn pow(x: Expr, n: u32) -> Expr {
    match n {
        0 => Expr::int(1),
        1 => x,
        _ => Expr::Pow(b(x), n),
    }
}

fn call(f: Func, x: Expr) -> Expr {
    Expr::Call(f, b(x))
}

/// Symbolic derivative of `e` with respect to `var`, lightly simplified.
pub fn differentiate(e: &Expr, var: &str) -> Result<Expr, DiffError> {
    Ok(match e {
        Expr::Const(_) => Expr::int(0),
        Expr::Var(v) => Expr::int(i64::from(v == var)),
        Expr::Neg(a) => neg(differentiate(a, var)?),
        Expr::Add(p, q) => add(differentiate(p, var)?, differentiate(q, var)?),
        Expr::Sub(p, q) => sub(differentiate(p, var)?, differentiate(q, var)?),
        Expr::Mul(p, q) => {
            let (dp, dq) = (differentiate(p, var)?, differentiate(q, var)?);
            add(mul(dp, (**q).clone()), mul((**p).clone(), dq))
        }
        Expr::Div(p, q) => {
            let (dp, dq) = (differentiate(p, var)?, differentiate(q, var)?);
            if dq.is_zero() {
                div(dp, (**q).clone())
            } else {
                let num = sub(mul(dp, (**q).clone()), mul((**p).clone(), dq));
                div(num, pow((**q).clone(), 2))
            }
        }
        Expr::Pow(a, n) => {
            let da = differentiate(a, var)?;
            if *n == 0 {
                Expr::int(0)
            } else {
                mul(mul(Expr::int(i64::from(*n)), pow((**a).clone(), n - 1)), da)
            }
        }
        Expr::Call(f, a) => {
            let da = differentiate(a, var)?;
            let a = (**a).clone();
            match f {
                Func::Exp => mul(call(Func::Exp, a), da),
                Func::Sin => mul(call(Func::Cos, a), da),
                Func::Cos => neg(mul(call(Func::Sin, a), da)),
                Func::Log => div(da, a),
                Func::Sqrt => div(da, mul(Expr::int(2), call(Func::Sqrt, a))),
            }
        }
        Expr::Step { .. } => return Err(DiffError::NonDifferentiable(e.to_string())),
    })
}
