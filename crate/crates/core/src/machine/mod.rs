//! Interval machines: flow-graph programs whose registers hold intervals.
//!
//! A program is written one instruction per line:
//!
//! ```text
//! # F(X, Y) = [0,0] if X+Y <= 0, [1,1] if X+Y > 0, [0,1] otherwise
//! input X Y
//!       S <- add X Y
//!       br le S [0,0] ZERO POS
//! POS:  br lt [0,0] S ONE BOTH
//! ZERO: R <- [0,0]
//!       goto END
//! ONE:  R <- [1,1]
//!       goto END
//! BOTH: R <- [0,1]
//! END:  stop R
//! ```
//!
//! Instructions are `T <- op A B` with `op` one of `add sub mul div`,
//! `T <- left A`, `T <- right A`, `T <- abs A`, `T <- A`, `T <- [c1,c2]`,
//! `T <- pop S`, `push S A`, `br <eq|lt|le|subset> A B YES NO`,
//! `br empty S YES NO`, `goto L` and `stop A ...`. Operands are variable
//! names or literal intervals. Control falls through to the next line unless
//! redirected by `goto`. Literals must be exactly representable in the
//! backend the program is parsed for.

mod compile;
mod parse;
mod run;

use std::fmt;

use thiserror::Error;

use crate::interval::Interval;
use crate::scalar::{terminating_decimal, Scalar};

pub use compile::{compile_expr, CompileError};
pub use parse::parse_program;
pub use run::{run, trace, MachineOutcome, TraceEntry};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasicOp {
    Add,
    Sub,
    Mul,
    Div,
    Left,
    Right,
    Abs,
}

impl BasicOp {
    pub fn name(self) -> &'static str {
        match self {
            BasicOp::Add => "add",
            BasicOp::Sub => "sub",
            BasicOp::Mul => "mul",
            BasicOp::Div => "div",
            BasicOp::Left => "left",
            BasicOp::Right => "right",
            BasicOp::Abs => "abs",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            BasicOp::Add | BasicOp::Sub | BasicOp::Mul | BasicOp::Div => 2,
            BasicOp::Left | BasicOp::Right | BasicOp::Abs => 1,
        }
    }

    fn from_name(s: &str) -> Option<BasicOp> {
        Some(match s {
            "add" => BasicOp::Add,
            "sub" => BasicOp::Sub,
            "mul" => BasicOp::Mul,
            "div" => BasicOp::Div,
            "left" => BasicOp::Left,
            "right" => BasicOp::Right,
            "abs" => BasicOp::Abs,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pred {
    Eq,
    Lt,
    Le,
    Subset,
}

impl Pred {
    pub fn name(self) -> &'static str {
        match self {
            Pred::Eq => "eq",
            Pred::Lt => "lt",
            Pred::Le => "le",
            Pred::Subset => "subset",
        }
    }

    fn from_name(s: &str) -> Option<Pred> {
        Some(match s {
            "eq" => Pred::Eq,
            "lt" => Pred::Lt,
            "le" => Pred::Le,
            "subset" => Pred::Subset,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Operand<T> {
    Var(String),
    Lit(Interval<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rhs<T> {
    Const(Interval<T>),
    Copy(String),
    Op(BasicOp, Vec<Operand<T>>),
    Pop(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node<T> {
    Start {
        next: NodeId,
    },
    Stop {
        outputs: Vec<String>,
    },
    Assign {
        target: String,
        rhs: Rhs<T>,
        next: NodeId,
    },
    Branch {
        pred: Pred,
        args: [Operand<T>; 2],
        yes: NodeId,
        no: NodeId,
    },
    Push {
        stack: String,
        value: Operand<T>,
        next: NodeId,
    },
    EmptyTest {
        stack: String,
        yes: NodeId,
        no: NodeId,
    },
}

impl<T> Node<T> {
    pub fn successors(&self) -> Vec<NodeId> {
        match self {
            Node::Stop { .. } => vec![],
            Node::Start { next } | Node::Assign { next, .. } | Node::Push { next, .. } => vec![*next],
            Node::Branch { yes, no, .. } | Node::EmptyTest { yes, no, .. } => vec![*yes, *no],
        }
    }
}

/// A validated program. Node 0 is the start node.
#[derive(Clone, Debug, PartialEq)]
pub struct MachineProgram<T> {
    pub inputs: Vec<String>,
    pub nodes: Vec<Node<T>>,
    /// Source label of each node, if it had one.
    pub labels: Vec<Option<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid program: {0}")]
    Validation(String),
    #[error("program takes {expected} inputs, got {got}")]
    Arity { expected: usize, got: usize },
}

impl<T: Scalar> MachineProgram<T> {
    pub fn start(&self) -> NodeId {
        0
    }

    pub fn stop(&self) -> NodeId {
        self.nodes
            .iter()
            .position(|n| matches!(n, Node::Stop { .. }))
            .expect("validated programs have a stop node")
    }

    /// The source label of a node, or `n<id>` for unlabeled nodes.
    pub fn label(&self, id: NodeId) -> String {
        match &self.labels[id] {
            Some(l) => l.clone(),
            None => format!("n{id}"),
        }
    }
}

fn write_operand<T: Scalar>(f: &mut fmt::Formatter<'_>, a: &Operand<T>) -> fmt::Result {
    match a {
        Operand::Var(v) => write!(f, "{v}"),
        Operand::Lit(x) => write!(f, "[{},{}]", exact_text(x.lo()), exact_text(x.hi())),
    }
}

// Shortest float text may name a different real than the float itself.
fn exact_text<T: Scalar>(x: &T) -> String {
    terminating_decimal(&x.to_rational()).unwrap_or_else(|| x.to_decimal())
}

fn tag(id: NodeId) -> String {
    format!("n{id}")
}

/// Prints the program in the textual format, labelling node `i` as `n<i>`.
impl<T: Scalar> fmt::Display for MachineProgram<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (id, node) in self.nodes.iter().enumerate() {
            let next = match node {
                Node::Start { next } => {
                    write!(f, "input")?;
                    for v in &self.inputs {
                        write!(f, " {v}")?;
                    }
                    writeln!(f)?;
                    Some(*next)
                }
                Node::Stop { outputs } => {
                    write!(f, "{}: stop", tag(id))?;
                    for v in outputs {
                        write!(f, " {v}")?;
                    }
                    writeln!(f)?;
                    None
                }
                Node::Assign { target, rhs, next } => {
                    write!(f, "{}: {target} <- ", tag(id))?;
                    match rhs {
                        Rhs::Const(c) => write_operand(f, &Operand::Lit(c.clone()))?,
                        Rhs::Copy(v) => write!(f, "{v}")?,
                        Rhs::Pop(s) => write!(f, "pop {s}")?,
                        Rhs::Op(op, args) => {
                            write!(f, "{}", op.name())?;
                            for a in args {
                                write!(f, " ")?;
                                write_operand(f, a)?;
                            }
                        }
                    }
                    writeln!(f)?;
                    Some(*next)
                }
                Node::Branch { pred, args, yes, no } => {
                    write!(f, "{}: br {} ", tag(id), pred.name())?;
                    write_operand(f, &args[0])?;
                    write!(f, " ")?;
                    write_operand(f, &args[1])?;
                    writeln!(f, " {} {}", tag(*yes), tag(*no))?;
                    None
                }
                Node::Push { stack, value, next } => {
                    write!(f, "{}: push {stack} ", tag(id))?;
                    write_operand(f, value)?;
                    writeln!(f)?;
                    Some(*next)
                }
                Node::EmptyTest { stack, yes, no } => {
                    writeln!(
                        f,
                        "{}: br empty {stack} {} {}",
                        tag(id),
                        tag(*yes),
                        tag(*no)
                    )?;
                    None
                }
            };
            if let Some(n) = next {
                if n != id + 1 {
                    writeln!(f, "goto {}", tag(n))?;
                }
            }
        }
        Ok(())
    }
}
