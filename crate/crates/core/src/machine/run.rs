use std::collections::BTreeMap;

use serde::Serialize;

use super::{BasicOp, MachineError, MachineProgram, Node, NodeId, Operand, Pred, Rhs};
use crate::interval::Interval;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum MachineOutcome<T> {
    /// Values of the stop node's variables, in order.
    Halted(Vec<Interval<T>>),
    Undefined { reason: String, node: NodeId },
    StepBudgetExceeded,
}

/// The machine state right after a node executed.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct TraceEntry<T> {
    pub step: u64,
    pub node: NodeId,
    pub vars: BTreeMap<String, Interval<T>>,
    pub stacks: BTreeMap<String, Vec<Interval<T>>>,
}

struct State<T> {
    vars: BTreeMap<String, Interval<T>>,
    stacks: BTreeMap<String, Vec<Interval<T>>>,
}

impl<T: Scalar> State<T> {
    fn get(&self, name: &str) -> Result<Interval<T>, String> {
        self.vars
            .get(name)
            .cloned()
            .ok_or_else(|| format!("variable `{name}` is undefined"))
    }

    fn value(&self, a: &Operand<T>) -> Result<Interval<T>, String> {
        match a {
            Operand::Var(v) => self.get(v),
            Operand::Lit(x) => Ok(x.clone()),
        }
    }
}

fn apply<T: Scalar>(op: BasicOp, args: &[Interval<T>]) -> Result<Interval<T>, String> {
    let r = match op {
        BasicOp::Add => args[0].add(&args[1]),
        BasicOp::Sub => args[0].sub(&args[1]),
        BasicOp::Mul => args[0].mul(&args[1]),
        BasicOp::Div => args[0].div(&args[1]),
        BasicOp::Left => Ok(args[0].left()),
        BasicOp::Right => Ok(args[0].right()),
        BasicOp::Abs => Ok(args[0].abs()),
    };
    r.map_err(|e| format!("{}: {e}", op.name()))
}

fn test<T: Scalar>(pred: Pred, a: &Interval<T>, b: &Interval<T>) -> bool {
    match pred {
        Pred::Eq => a == b,
        Pred::Lt => a.lt(b),
        Pred::Le => a.le(b),
        Pred::Subset => a.subset(b),
    }
}

fn execute<T: Scalar>(
    p: &MachineProgram<T>,
    inputs: &[Interval<T>],
    budget: u64,
    mut log: Option<&mut Vec<TraceEntry<T>>>,
) -> Result<MachineOutcome<T>, MachineError> {
    if inputs.len() != p.inputs.len() {
        return Err(MachineError::Arity {
            expected: p.inputs.len(),
            got: inputs.len(),
        });
    }
    let mut st = State {
        vars: BTreeMap::new(),
        stacks: BTreeMap::new(),
    };
    let mut pc = p.start();
    let mut step = 0u64;
    loop {
        if step == budget {
            return Ok(MachineOutcome::StepBudgetExceeded);
        }
        let undefined = |reason: String| MachineOutcome::Undefined { reason, node: pc };
        let next = match &p.nodes[pc] {
            Node::Start { next } => {
                for (name, x) in p.inputs.iter().zip(inputs) {
                    st.vars.insert(name.clone(), x.clone());
                }
                Some(*next)
            }
            Node::Stop { outputs } => {
                let values: Result<Vec<_>, _> = outputs.iter().map(|v| st.get(v)).collect();
                match values {
                    Ok(v) => {
                        record(&mut log, step, pc, &st);
                        return Ok(MachineOutcome::Halted(v));
                    }
                    Err(reason) => return Ok(undefined(reason)),
                }
            }
            Node::Assign { target, rhs, next } => {
                let value = match rhs {
                    Rhs::Const(c) => Ok(c.clone()),
                    Rhs::Copy(v) => st.get(v),
                    Rhs::Op(op, args) => args
                        .iter()
                        .map(|a| st.value(a))
                        .collect::<Result<Vec<_>, _>>()
                        .and_then(|xs| apply(*op, &xs)),
                    Rhs::Pop(s) => match st.stacks.get_mut(s).and_then(Vec::pop) {
                        Some(x) => Ok(x),
                        None => Err(format!("pop from empty or missing stack `{s}`")),
                    },
                };
                match value {
                    Ok(x) => {
                        st.vars.insert(target.clone(), x);
                    }
                    Err(reason) => return Ok(undefined(reason)),
                }
                Some(*next)
            }
            Node::Branch { pred, args, yes, no } => {
                let a = st.value(&args[0]);
                let b = st.value(&args[1]);
                match (a, b) {
                    (Ok(a), Ok(b)) => Some(if test(*pred, &a, &b) { *yes } else { *no }),
                    (Err(reason), _) | (_, Err(reason)) => return Ok(undefined(reason)),
                }
            }
            Node::Push { stack, value, next } => match st.value(value) {
                Ok(x) => {
                    st.stacks.entry(stack.clone()).or_default().push(x);
                    Some(*next)
                }
                Err(reason) => return Ok(undefined(reason)),
            },
            Node::EmptyTest { stack, yes, no } => match st.stacks.get(stack) {
                Some(s) => Some(if s.is_empty() { *yes } else { *no }),
                None => return Ok(undefined(format!("stack `{stack}` does not exist"))),
            },
        };
        record(&mut log, step, pc, &st);
        step += 1;
        pc = next.expect("only stop nodes end execution");
    }
}

fn record<T: Scalar>(log: &mut Option<&mut Vec<TraceEntry<T>>>, step: u64, node: NodeId, st: &State<T>) {
    if let Some(log) = log {
        log.push(TraceEntry {
            step,
            node,
            vars: st.vars.clone(),
            stacks: st.stacks.clone(),
        });
    }
}

/// Executes `p` on `inputs`, giving up after `budget` node executions.
pub fn run<T: Scalar>(
    p: &MachineProgram<T>,
    inputs: &[Interval<T>],
    budget: u64,
) -> Result<MachineOutcome<T>, MachineError> {
    execute(p, inputs, budget, None)
}

/// Like [`run`], also returning the state after every executed node.
pub fn trace<T: Scalar>(
    p: &MachineProgram<T>,
    inputs: &[Interval<T>],
    budget: u64,
) -> Result<(Vec<TraceEntry<T>>, MachineOutcome<T>), MachineError> {
    let mut log = Vec::new();
    let outcome = execute(p, inputs, budget, Some(&mut log))?;
    Ok((log, outcome))
}
