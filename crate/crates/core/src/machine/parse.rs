use std::collections::{BTreeSet, HashMap};

use super::{BasicOp, MachineError, MachineProgram, Node, NodeId, Operand, Pred, Rhs};
use crate::interval::Interval;
use crate::scalar::Scalar;

enum Draft<T> {
    Start(Vec<String>),
    Stop(Vec<String>),
    Assign(String, Rhs<T>),
    Branch(Pred, [Operand<T>; 2], String, String),
    Push(String, Operand<T>),
    Empty(String, String, String),
    Goto(String),
}

struct Item<T> {
    draft: Draft<T>,
    line: usize,
    label: Option<String>,
}

fn syntax(line: usize, message: impl Into<String>) -> MachineError {
    MachineError::Syntax {
        line,
        message: message.into(),
    }
}

fn invalid(message: impl Into<String>) -> MachineError {
    MachineError::Validation(message.into())
}

/// Splits a line into words, keeping `[a, b]` together.
fn tokenize(text: &str, line: usize) -> Result<Vec<String>, MachineError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = false;
    for c in text.chars() {
        match c {
            '[' if !depth => {
                depth = true;
                cur.push(c);
            }
            ']' if depth => {
                depth = false;
                cur.push(c);
            }
            c if c.is_whitespace() && !depth => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if depth {
        return Err(syntax(line, "unclosed `[`"));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn name(tok: &str, line: usize) -> Result<String, MachineError> {
    if is_name(tok) {
        Ok(tok.to_string())
    } else {
        Err(syntax(line, format!("`{tok}` is not a valid name")))
    }
}

fn literal<T: Scalar>(tok: &str, line: usize) -> Result<Interval<T>, MachineError> {
    Interval::parse_exact(tok).map_err(|e| syntax(line, format!("bad literal `{tok}`: {e}")))
}

fn operand<T: Scalar>(tok: &str, line: usize) -> Result<Operand<T>, MachineError> {
    if tok.starts_with('[') {
        Ok(Operand::Lit(literal(tok, line)?))
    } else {
        Ok(Operand::Var(name(tok, line)?))
    }
}

fn arity(toks: &[String], n: usize, what: &str, line: usize) -> Result<(), MachineError> {
    if toks.len() == n {
        Ok(())
    } else {
        Err(syntax(line, format!("`{what}` takes {} operands", n - 1)))
    }
}

fn parse_line<T: Scalar>(toks: &[String], line: usize) -> Result<Draft<T>, MachineError> {
    let head = toks[0].as_str();
    if toks.get(1).map(String::as_str) == Some("<-") {
        let target = name(head, line)?;
        let rhs = &toks[2..];
        let Some(first) = rhs.first() else {
            return Err(syntax(line, "missing right-hand side"));
        };
        let value = if rhs.len() == 1 {
            if first.starts_with('[') {
                Rhs::Const(literal(first, line)?)
            } else {
                Rhs::Copy(name(first, line)?)
            }
        } else if first == "pop" {
            arity(rhs, 2, "pop", line)?;
            Rhs::Pop(name(&rhs[1], line)?)
        } else if let Some(op) = BasicOp::from_name(first) {
            arity(rhs, op.arity() + 1, first, line)?;
            let args = rhs[1..]
                .iter()
                .map(|t| operand(t, line))
                .collect::<Result<_, _>>()?;
            Rhs::Op(op, args)
        } else {
            return Err(syntax(line, format!("unknown operation `{first}`")));
        };
        return Ok(Draft::Assign(target, value));
    }
    Ok(match head {
        "input" => Draft::Start(toks[1..].iter().map(|t| name(t, line)).collect::<Result<_, _>>()?),
        "stop" => Draft::Stop(toks[1..].iter().map(|t| name(t, line)).collect::<Result<_, _>>()?),
        "goto" => {
            arity(toks, 2, "goto", line)?;
            Draft::Goto(name(&toks[1], line)?)
        }
        "push" => {
            arity(toks, 3, "push", line)?;
            Draft::Push(name(&toks[1], line)?, operand(&toks[2], line)?)
        }
        "br" => {
            let Some(kind) = toks.get(1) else {
                return Err(syntax(line, "missing branch predicate"));
            };
            if kind == "empty" {
                arity(toks, 5, "br empty", line)?;
                Draft::Empty(name(&toks[2], line)?, name(&toks[3], line)?, name(&toks[4], line)?)
            } else {
                let pred = Pred::from_name(kind)
                    .ok_or_else(|| syntax(line, format!("unknown predicate `{kind}`")))?;
                arity(toks, 6, "br", line)?;
                Draft::Branch(
                    pred,
                    [operand(&toks[2], line)?, operand(&toks[3], line)?],
                    name(&toks[4], line)?,
                    name(&toks[5], line)?,
                )
            }
        }
        other => return Err(syntax(line, format!("unknown instruction `{other}`"))),
    })
}

fn lex_items<T: Scalar>(src: &str) -> Result<Vec<Item<T>>, MachineError> {
    let mut items = Vec::new();
    let mut pending: Option<(String, usize)> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("");
        let mut toks = tokenize(text, line)?;
        if toks.is_empty() {
            continue;
        }
        if let Some(l) = toks[0].strip_suffix(':') {
            let l = name(l, line)?;
            if let Some((prev, _)) = pending {
                return Err(syntax(line, format!("labels `{prev}` and `{l}` name the same line")));
            }
            pending = Some((l, line));
            toks.remove(0);
            if toks.is_empty() {
                continue;
            }
        }
        items.push(Item {
            draft: parse_line(&toks, line)?,
            line,
            label: pending.take().map(|(l, _)| l),
        });
    }
    if let Some((l, line)) = pending {
        return Err(syntax(line, format!("label `{l}` marks no instruction")));
    }
    Ok(items)
}

/// Parses and validates a program; literals must be exact in `T`.
pub fn parse_program<T: Scalar>(src: &str) -> Result<MachineProgram<T>, MachineError> {
    let items = lex_items::<T>(src)?;

    let starts: Vec<_> = items
        .iter()
        .filter(|it| matches!(it.draft, Draft::Start(_)))
        .collect();
    match starts.len() {
        0 => return Err(invalid("missing `input` line")),
        1 => {}
        _ => return Err(invalid(format!("duplicate start node on line {}", starts[1].line))),
    }
    if !matches!(items[0].draft, Draft::Start(_)) {
        return Err(invalid("`input` must be the first instruction"));
    }
    if items[0].label.is_some() {
        return Err(invalid("the start node cannot be a jump target"));
    }
    let stops = items
        .iter()
        .filter(|it| matches!(it.draft, Draft::Stop(_)))
        .count();
    match stops {
        0 => return Err(invalid("missing `stop` line")),
        1 => {}
        _ => return Err(invalid("duplicate stop node")),
    }

    let mut labels: HashMap<&str, usize> = HashMap::new();
    for (idx, it) in items.iter().enumerate() {
        if let Some(l) = &it.label {
            if labels.insert(l, idx).is_some() {
                return Err(invalid(format!("duplicate label `{l}`")));
            }
        }
    }

    let mut node_of = vec![None; items.len()];
    let mut count = 0;
    for (idx, it) in items.iter().enumerate() {
        if !matches!(it.draft, Draft::Goto(_)) {
            node_of[idx] = Some(count);
            count += 1;
        }
    }
    // Follows gotos from item `idx` to the node control lands on.
    let land = |mut idx: usize, from_line: usize| -> Result<NodeId, MachineError> {
        for _ in 0..=items.len() {
            let Some(it) = items.get(idx) else {
                return Err(invalid(format!("control falls off the end after line {from_line}")));
            };
            match &it.draft {
                Draft::Goto(target) => {
                    idx = *labels
                        .get(target.as_str())
                        .ok_or_else(|| invalid(format!("unknown label `{target}` on line {}", it.line)))?;
                }
                _ => return Ok(node_of[idx].expect("non-goto items are nodes")),
            }
        }
        Err(invalid(format!("goto cycle reached from line {from_line}")))
    };
    let jump = |label: &str, line: usize| -> Result<NodeId, MachineError> {
        let idx = *labels
            .get(label)
            .ok_or_else(|| invalid(format!("unknown label `{label}` on line {line}")))?;
        land(idx, line)
    };

    let mut inputs = Vec::new();
    let mut nodes = Vec::with_capacity(count);
    let mut node_labels = Vec::with_capacity(count);
    let mut node_lines = Vec::with_capacity(count);
    for (idx, it) in items.iter().enumerate() {
        let next = || land(idx + 1, it.line);
        let node = match &it.draft {
            Draft::Goto(target) => {
                jump(target, it.line)?;
                continue;
            }
            Draft::Start(names) => {
                inputs = names.clone();
                Node::Start { next: next()? }
            }
            Draft::Stop(outputs) => Node::Stop {
                outputs: outputs.clone(),
            },
            Draft::Assign(target, rhs) => Node::Assign {
                target: target.clone(),
                rhs: rhs.clone(),
                next: next()?,
            },
            Draft::Branch(pred, args, yes, no) => Node::Branch {
                pred: *pred,
                args: args.clone(),
                yes: jump(yes, it.line)?,
                no: jump(no, it.line)?,
            },
            Draft::Push(stack, value) => Node::Push {
                stack: stack.clone(),
                value: value.clone(),
                next: next()?,
            },
            Draft::Empty(stack, yes, no) => Node::EmptyTest {
                stack: stack.clone(),
                yes: jump(yes, it.line)?,
                no: jump(no, it.line)?,
            },
        };
        nodes.push(node);
        node_labels.push(it.label.clone());
        node_lines.push(it.line);
    }

    let program = MachineProgram {
        inputs,
        nodes,
        labels: node_labels,
    };
    check_names(&program)?;
    check_reachable(&program, &node_lines)?;
    Ok(program)
}

fn check_names<T>(p: &MachineProgram<T>) -> Result<(), MachineError> {
    let mut vars = BTreeSet::new();
    for v in &p.inputs {
        if !vars.insert(v.clone()) {
            return Err(invalid(format!("input `{v}` is listed twice")));
        }
    }
    let mut stacks = BTreeSet::new();
    let operand = |a: &Operand<T>, vars: &mut BTreeSet<String>| {
        if let Operand::Var(v) = a {
            vars.insert(v.clone());
        }
    };
    for node in &p.nodes {
        match node {
            Node::Start { .. } => {}
            Node::Stop { outputs } => vars.extend(outputs.iter().cloned()),
            Node::Assign { target, rhs, .. } => {
                vars.insert(target.clone());
                match rhs {
                    Rhs::Const(_) => {}
                    Rhs::Copy(v) => {
                        vars.insert(v.clone());
                    }
                    Rhs::Op(_, args) => args.iter().for_each(|a| operand(a, &mut vars)),
                    Rhs::Pop(s) => {
                        stacks.insert(s.clone());
                    }
                }
            }
            Node::Branch { args, .. } => args.iter().for_each(|a| operand(a, &mut vars)),
            Node::Push { stack, value, .. } => {
                stacks.insert(stack.clone());
                operand(value, &mut vars);
            }
            Node::EmptyTest { stack, .. } => {
                stacks.insert(stack.clone());
            }
        }
    }
    match vars.intersection(&stacks).next() {
        Some(clash) => Err(invalid(format!("`{clash}` names both a stack and a variable"))),
        None => Ok(()),
    }
}

fn check_reachable<T>(p: &MachineProgram<T>, lines: &[usize]) -> Result<(), MachineError> {
    let mut seen = vec![false; p.nodes.len()];
    let mut todo = vec![0];
    seen[0] = true;
    while let Some(id) = todo.pop() {
        for s in p.nodes[id].successors() {
            if !seen[s] {
                seen[s] = true;
                todo.push(s);
            }
        }
    }
    match seen.iter().position(|s| !s) {
        Some(id) => Err(invalid(format!("instruction on line {} is unreachable", lines[id]))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    const FIG: &str = "\
input X Y
      S <- add X Y
      br le S [0,0] ZERO POS
POS:  br lt [0,0] S ONE BOTH
ZERO: R <- [0,0]
      goto END
ONE:  R <- [1,1]
      goto END
BOTH: R <- [0,1]
END:  stop R
";

    #[test]
    fn figure_program_shape() {
        let p = parse_program::<f64>(FIG).unwrap();
        assert_eq!(p.inputs, ["X", "Y"]);
        assert_eq!(p.nodes.len(), 8);
        assert_eq!(p.nodes[2], Node::Branch {
            pred: Pred::Le,
            args: [Operand::Var("S".into()), Operand::Lit(Interval::zero())],
            yes: 4,
            no: 3,
        });
        assert!(matches!(p.nodes[4], Node::Assign { next: 7, .. }));
        assert_eq!(p.label(7), "END");
    }

    #[test]
    fn display_round_trips() {
        let p = parse_program::<f64>(FIG).unwrap();
        let q = parse_program::<f64>(&p.to_string()).unwrap();
        assert_eq!(p.nodes, q.nodes);
        let src = "input X\nY <- [0.1,0.1]\nstop Y\n";
        let r = parse_program::<Rational>(src).unwrap();
        assert_eq!(parse_program::<Rational>(&r.to_string()).unwrap().nodes, r.nodes);
    }

    fn err(src: &str) -> MachineError {
        parse_program::<f64>(src).unwrap_err()
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(err("input X\ninput Y\nstop X"), MachineError::Validation(_)));
        assert!(matches!(err("input X\nstop X\nstop X"), MachineError::Validation(_)));
        assert!(matches!(err("input X\nstop X\nY <- X"), MachineError::Validation(_)));
        assert!(matches!(err("input X\ngoto NOWHERE\nstop X"), MachineError::Validation(_)));
        assert!(matches!(
            err("input X\npush X X\nstop X"),
            MachineError::Validation(m) if m.contains("both a stack and a variable")
        ));
        assert!(matches!(err("input X\nA: goto B\nB: goto A\nstop X"), MachineError::Validation(_)));
        assert!(matches!(err("input X\nY <- X"), MachineError::Validation(_)));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(err("input X\nY <- frob X\nstop Y"), MachineError::Syntax { line: 2, .. }));
        assert!(matches!(err("input X\nY <- [2,1]\nstop Y"), MachineError::Syntax { line: 2, .. }));
        assert!(matches!(err("input X\nY <- [0.1,0.1]\nstop Y"), MachineError::Syntax { line: 2, .. }));
        assert!(matches!(err("input X\nY <- add X\nstop Y"), MachineError::Syntax { .. }));
        assert!(matches!(err("input X\nbr lt X X A\nstop X"), MachineError::Syntax { .. }));
        assert!(matches!(err("input X\nY <- [0, 1\nstop Y"), MachineError::Syntax { .. }));
    }
}
