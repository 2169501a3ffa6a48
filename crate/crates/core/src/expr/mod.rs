//! A small language of real expressions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-" factor | atom ("^" INT)?
//! atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! Builtins are `exp`, `sin`, `cos`, `log`, `sqrt` and
//! `step(c, a1, a2; x)`, which is `a1` for `x > c` and `a2` otherwise.

mod diff;
mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::terminating_decimal;

pub use diff::{differentiate, DiffError};
pub use eval::{eval_at, eval_iv, EvalContext, EvalError};
pub use parse::{parse, parse_in, ParseError, ParseErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// A non-negative literal; negative values are written with `Neg`.
    Const(BigRational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
    Step {
        c: BigRational,
        a1: BigRational,
        a2: BigRational,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    /// A literal of any sign.
    pub fn constant(q: BigRational) -> Expr {
        if q.is_negative() {
            Expr::Neg(Box::new(Expr::Const(-q)))
        } else {
            Expr::Const(q)
        }
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(BigRational::from_integer(n.into()))
    }

    /// The value of a constant expression built from literals and `Neg`.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self {
            Expr::Const(q) => Some(q.clone()),
            Expr::Neg(a) => a.as_constant().map(|q| -q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant().is_some_and(|q| q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|q| q.is_one())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect_vars(out),
            Expr::Step { arg, .. } => arg.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn contains_step(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Step { .. } => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.contains_step(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_step() || b.contains_step()
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Step { arg, .. } => 1 + arg.size(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Const(q) => write_literal(f, q),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Expr::Add(a, b) => binary(f, a, " + ", b, 1),
            Expr::Sub(a, b) => binary(f, a, " - ", b, 1),
            Expr::Mul(a, b) => binary(f, a, " * ", b, 2),
            Expr::Div(a, b) => binary(f, a, " / ", b, 2),
            Expr::Pow(a, n) => {
                a.write_at(f, 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                write!(f, ")")
            }
            Expr::Step { c, a1, a2, arg } => {
                write!(f, "step(")?;
                write_signed(f, c)?;
                write!(f, ", ")?;
                write_signed(f, a1)?;
                write!(f, ", ")?;
                write_signed(f, a2)?;
                write!(f, "; ")?;
                arg.write_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, level: u8) -> fmt::Result {
    a.write_at(f, level)?;
    write!(f, "{op}")?;
    b.write_at(f, level + 1)
}

fn write_literal(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    match terminating_decimal(q) {
        Some(s) => write!(f, "{s}"),
        None => write!(f, "({}/{})", q.numer(), q.denom()),
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_negative() {
        write!(f, "-")?;
        write_literal(f, &-q.clone())
    } else {
        write_literal(f, q)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
