use thiserror::Error;

use super::{BasicOp, MachineProgram, Node, Operand, Rhs};
use crate::expr::Expr;
use crate::interval::Interval;
use crate::scalar::{Round, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("`{0}` has no machine instruction")]
    Unsupported(String),
    #[error("constant {0} is not representable")]
    NotRepresentable(String),
    #[error("variable `{0}` is not an input")]
    UnknownVariable(String),
}

struct Emitter<T> {
    nodes: Vec<Node<T>>,
    prefix: String,
    temps: usize,
    inputs: Vec<String>,
}

impl<T: Scalar> Emitter<T> {
    fn assign(&mut self, rhs: Rhs<T>) -> String {
        self.temps += 1;
        let target = format!("{}{}", self.prefix, self.temps);
        let next = self.nodes.len() + 1;
        self.nodes.push(Node::Assign {
            target: target.clone(),
            rhs,
            next,
        });
        target
    }

    fn operand(&mut self, e: &Expr) -> Result<Operand<T>, CompileError> {
        Ok(match e {
            Expr::Var(v) if self.inputs.contains(v) => Operand::Var(v.clone()),
            Expr::Var(v) => return Err(CompileError::UnknownVariable(v.clone())),
            Expr::Const(q) => {
                let x = T::from_rational(q, Round::Down)
                    .ok()
                    .filter(|x| x.to_rational() == *q)
                    .ok_or_else(|| CompileError::NotRepresentable(e.to_string()))?;
                Operand::Lit(Interval::point(x))
            }
            _ => Operand::Var(self.emit(e)?),
        })
    }

    fn op(&mut self, op: BasicOp, args: &[&Expr]) -> Result<String, CompileError> {
        let args = args
            .iter()
            .map(|a| self.operand(a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.assign(Rhs::Op(op, args)))
    }

    /// Emits code for `e` and returns the variable holding its value.
    fn emit(&mut self, e: &Expr) -> Result<String, CompileError> {
        match e {
            Expr::Var(_) | Expr::Const(_) => match self.operand(e)? {
                Operand::Var(v) => Ok(self.assign(Rhs::Copy(v))),
                Operand::Lit(c) => Ok(self.assign(Rhs::Const(c))),
            },
            Expr::Neg(a) => {
                let a = self.operand(a)?;
                Ok(self.assign(Rhs::Op(BasicOp::Sub, vec![Operand::Lit(Interval::zero()), a])))
            }
            Expr::Add(a, b) => self.op(BasicOp::Add, &[a, b]),
            Expr::Sub(a, b) => self.op(BasicOp::Sub, &[a, b]),
            Expr::Mul(a, b) => self.op(BasicOp::Mul, &[a, b]),
            Expr::Div(a, b) => self.op(BasicOp::Div, &[a, b]),
            Expr::Pow(a, n) => {
                let base = self.operand(a)?;
                let mut acc = self.assign(Rhs::Const(Interval::one()));
                for _ in 0..*n {
                    acc = self.assign(Rhs::Op(BasicOp::Mul, vec![Operand::Var(acc), base.clone()]));
                }
                Ok(acc)
            }
            Expr::Call(..) | Expr::Step { .. } => Err(CompileError::Unsupported(e.to_string())),
        }
    }
}

/// Translates an arithmetic expression into a straight-line program with
/// inputs `inputs` and one output. Powers become repeated products, so the
/// program computes the natural extension with naive powers.
pub fn compile_expr<T: Scalar>(e: &Expr, inputs: &[&str]) -> Result<MachineProgram<T>, CompileError> {
    let mut prefix = "_t".to_string();
    while inputs.iter().any(|v| v.starts_with(&prefix)) {
        prefix.insert(0, '_');
    }
    let mut em = Emitter {
        nodes: vec![Node::Start { next: 1 }],
        prefix,
        temps: 0,
        inputs: inputs.iter().map(|s| s.to_string()).collect(),
    };
    let out = em.emit(e)?;
    em.nodes.push(Node::Stop { outputs: vec![out] });
    let labels = vec![None; em.nodes.len()];
    Ok(MachineProgram {
        inputs: em.inputs,
        nodes: em.nodes,
        labels,
    })
}
