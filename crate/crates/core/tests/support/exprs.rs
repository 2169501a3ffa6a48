use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use rigor::expr::{Expr, Func};

use super::q;

pub fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

pub fn literal(r: &mut ChaCha8Rng) -> BigRational {
    match r.gen_range(0..3) {
        0 => q(r.gen_range(0..20), 1),
        1 => q(r.gen_range(0..1000), 100),
        _ => q(r.gen_range(1..64), 1 << r.gen_range(1..8)),
    }
}

pub fn signed_literal(r: &mut ChaCha8Rng) -> BigRational {
    let v = literal(r);
    if r.gen_bool(0.3) {
        -v
    } else {
        v
    }
}

/// Any expression the language can write.
pub fn any_expr(r: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || r.gen_bool(0.2) {
        return match r.gen_range(0..3) {
            0 => Expr::Const(literal(r)),
            1 => Expr::var("x"),
            _ => Expr::var("y"),
        };
    }
    let d = depth - 1;
    match r.gen_range(0..9) {
        0 => Expr::Neg(b(any_expr(r, d))),
        1 => Expr::Add(b(any_expr(r, d)), b(any_expr(r, d))),
        2 => Expr::Sub(b(any_expr(r, d)), b(any_expr(r, d))),
        3 => Expr::Mul(b(any_expr(r, d)), b(any_expr(r, d))),
        4 => Expr::Div(b(any_expr(r, d)), b(any_expr(r, d))),
        5 => Expr::Pow(b(any_expr(r, d)), r.gen_range(0..6)),
        6 => {
            let f = [Func::Exp, Func::Sin, Func::Cos, Func::Log, Func::Sqrt][r.gen_range(0..5)];
            Expr::Call(f, b(any_expr(r, d)))
        }
        _ => Expr::Step {
            c: signed_literal(r),
            a1: signed_literal(r),
            a2: signed_literal(r),
            arg: b(any_expr(r, d)),
        },
    }
}

/// Rational expressions only, so points evaluate exactly.
pub fn f64_at(e: &Expr, x: f64) -> f64 {
    match e {
        Expr::Const(c) => c.to_f64().unwrap(),
        Expr::Var(_) => x,
        Expr::Neg(a) => -f64_at(a, x),
        Expr::Add(a, c) => f64_at(a, x) + f64_at(c, x),
        Expr::Sub(a, c) => f64_at(a, x) - f64_at(c, x),
        Expr::Mul(a, c) => f64_at(a, x) * f64_at(c, x),
        Expr::Div(a, c) => f64_at(a, x) / f64_at(c, x),
        Expr::Pow(a, n) => f64_at(a, x).powi(*n as i32),
        Expr::Call(f, a) => {
            let v = f64_at(a, x);
            match f {
                Func::Exp => v.exp(),
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Log => v.ln(),
                Func::Sqrt => v.sqrt(),
            }
        }
        Expr::Step { .. } => unreachable!(),
    }
}

/// Smooth expressions in `x` whose derivatives exist everywhere. Constants stay
/// in `[0, 2)` so a central difference can still resolve the result.
pub fn smooth_expr(r: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || r.gen_bool(0.2) {
        return if r.gen_bool(0.6) { Expr::var("x") } else { Expr::Const(q(r.gen_range(0..16), 8)) };
    }
    let d = depth - 1;
    let one_plus_square = |e: Expr| Expr::Add(b(Expr::int(1)), b(Expr::Pow(b(e), 2)));
    match r.gen_range(0..10) {
        0 => Expr::Neg(b(smooth_expr(r, d))),
        1 => Expr::Add(b(smooth_expr(r, d)), b(smooth_expr(r, d))),
        2 => Expr::Sub(b(smooth_expr(r, d)), b(smooth_expr(r, d))),
        3 => Expr::Mul(b(smooth_expr(r, d)), b(smooth_expr(r, d))),
        4 => Expr::Div(b(smooth_expr(r, d)), b(one_plus_square(smooth_expr(r, d)))),
        5 => Expr::Pow(b(smooth_expr(r, d)), r.gen_range(0..5)),
        6 => Expr::Call(Func::Exp, b(Expr::Div(b(smooth_expr(r, d)), b(Expr::int(4))))),
        7 => Expr::Call([Func::Sin, Func::Cos][r.gen_range(0..2)], b(smooth_expr(r, d))),
        8 => Expr::Call(Func::Log, b(one_plus_square(smooth_expr(r, d)))),
        _ => Expr::Call(Func::Sqrt, b(one_plus_square(smooth_expr(r, d)))),
    }
}
