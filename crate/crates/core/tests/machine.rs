mod support;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use rigor::expr::{eval_iv, EvalContext, Expr};
use rigor::machine::{compile_expr, parse_program, run, trace, MachineError, MachineOutcome, MachineProgram};
use rigor::{Interval, Rational, Scalar};
use support::*;

const SIGN: &str = "\
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

fn iv(lo: f64, hi: f64) -> Interval<f64> {
    Interval::new(lo, hi).unwrap()
}

fn halted<T: Scalar>(o: MachineOutcome<T>) -> Vec<Interval<T>> {
    match o {
        MachineOutcome::Halted(v) => v,
        other => panic!("{other:?}"),
    }
}

#[test]
fn sign_program() {
    let p = parse_program::<f64>(SIGN).unwrap();
    assert_eq!(p.nodes.len(), 8);
    for (x, y, want) in [
        (iv(1.0, 2.0), iv(3.0, 4.0), iv(1.0, 1.0)),
        (iv(-2.0, -1.0), iv(-1.0, 0.0), iv(0.0, 0.0)),
        (iv(-1.0, 1.0), iv(0.0, 0.0), iv(0.0, 1.0)),
    ] {
        assert_eq!(halted(run(&p, &[x, y], 100).unwrap()), [want]);
    }
    let p = parse_program::<Rational>(SIGN).unwrap();
    let r = |a, b| Interval::new(Rational::new(a, 3), Rational::new(b, 3)).unwrap();
    assert_eq!(halted(run(&p, &[r(-1, 2), r(-1, -1)], 100).unwrap()), [Interval::new(Rational::from_integer(0), Rational::from_integer(1)).unwrap()]);
}

#[test]
fn traces_are_deterministic() {
    let p = parse_program::<f64>(SIGN).unwrap();
    let inputs = [iv(1.0, 2.0), iv(3.0, 4.0)];
    let render = || {
        let (log, outcome) = trace(&p, &inputs, 100).unwrap();
        let lines: Vec<String> = log.iter().map(|e| serde_json::to_string(e).unwrap()).collect();
        (lines.join("\n"), outcome)
    };
    let (a, oa) = render();
    let (b, ob) = render();
    assert_eq!(a, b);
    assert_eq!(oa, ob);
    assert_eq!(oa, run(&p, &inputs, 100).unwrap());
    let first: serde_json::Value = serde_json::from_str(a.lines().next().unwrap()).unwrap();
    assert_eq!(first["node"], 0);
    assert_eq!(first["step"], 0);
    assert!(first["vars"]["X"].is_object() && first["stacks"].is_object());
}

#[test]
fn stack_semantics() {
    let src = "\
input X
      push S X
      br empty S EMPTY FULL
EMPTY: R <- [9,9]
      goto END
FULL: R <- pop S
      br empty S END EMPTY
END:  stop R
";
    let p = parse_program::<f64>(src).unwrap();
    assert_eq!(halted(run(&p, &[iv(2.0, 3.0)], 100).unwrap()), [iv(2.0, 3.0)]);
    let p = parse_program::<f64>("input X\nR <- pop S\nstop R").unwrap();
    assert!(matches!(run(&p, &[iv(0.0, 0.0)], 10).unwrap(), MachineOutcome::Undefined { .. }));
}

#[test]
fn integer_addition_by_counting() {
    // R = A + B computed with unit increments, values as degenerate intervals.
    let src = "\
input A B
      R <- A
      C <- [0,0]
LOOP: br eq C B END STEP
STEP: R <- add R [1,1]
      C <- add C [1,1]
      goto LOOP
END:  stop R
";
    let p = parse_program::<f64>(src).unwrap();
    for (a, b) in [(0, 0), (3, 4), (10, 1), (-5, 7)] {
        let out = halted(run(&p, &[iv(a as f64, a as f64), iv(b as f64, b as f64)], 10_000).unwrap());
        assert_eq!(out, [iv((a + b) as f64, (a + b) as f64)]);
    }
    assert_eq!(run(&p, &[iv(0.0, 0.0), iv(-1.0, -1.0)], 1000).unwrap(), MachineOutcome::StepBudgetExceeded);
}

#[test]
fn validation_errors() {
    let bad = [
        "input X\ninput Y\nstop X",
        "input X\npush X X\nstop X",
        "input X\npush S X\nS <- X\nstop X",
        "input X\nstop X\nstop X",
        "input X\nR <- [2,1]\nstop R",
        "input X\ngoto NOWHERE\nstop X",
        "input X\nL: R <- X\nL: stop R",
        "R <- [1,1]\ninput X\nstop R",
    ];
    for src in bad {
        let err = parse_program::<f64>(src).unwrap_err();
        assert!(matches!(err, MachineError::Syntax { .. } | MachineError::Validation(_)), "{src}");
    }
    assert!(matches!(
        parse_program::<f64>("input X\nR <- [0.1,0.1]\nstop R"),
        Err(MachineError::Syntax { .. })
    ));
    assert!(parse_program::<Rational>("input X\nR <- [0.1,0.1]\nstop R").is_ok());
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn arithmetic_expr(r: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || r.gen_bool(0.25) {
        return match r.gen_range(0..3) {
            0 => Expr::Const(q(r.gen_range(0..40), 1 << r.gen_range(0..4))),
            1 => Expr::var("x"),
            _ => Expr::var("y"),
        };
    }
    let d = depth - 1;
    match r.gen_range(0..6) {
        0 => Expr::Neg(b(arithmetic_expr(r, d))),
        1 => Expr::Add(b(arithmetic_expr(r, d)), b(arithmetic_expr(r, d))),
        2 => Expr::Sub(b(arithmetic_expr(r, d)), b(arithmetic_expr(r, d))),
        3 => Expr::Mul(b(arithmetic_expr(r, d)), b(arithmetic_expr(r, d))),
        4 => Expr::Div(b(arithmetic_expr(r, d)), b(arithmetic_expr(r, d))),
        _ => Expr::Pow(b(arithmetic_expr(r, d)), r.gen_range(0..5)),
    }
}

fn agrees<T: Scalar>(e: &Expr, x: Interval<T>, y: Interval<T>, tol: T) {
    let p: MachineProgram<T> = compile_expr(e, &["x", "y"]).unwrap();
    let mut ctx = EvalContext::new(tol).bind("x", x.clone()).bind("y", y.clone());
    ctx.naive_powers = true;
    match (eval_iv(e, &ctx), run(&p, &[x, y], 100_000).unwrap()) {
        (Ok(v), MachineOutcome::Halted(out)) => assert_eq!(out, [v], "{e}"),
        (Err(_), MachineOutcome::Undefined { .. }) => {}
        (a, b) => panic!("{e}: eval {a:?} but machine {b:?}"),
    }
    let reparsed = parse_program::<T>(&p.to_string()).unwrap();
    assert_eq!(reparsed.nodes, p.nodes);
}

#[test]
fn compiled_programs_match_evaluation() {
    let mut r = rng(41);
    for _ in 0..500 {
        let e = arithmetic_expr(&mut r, 4);
        agrees(&e, f64_interval(&mut r), f64_interval(&mut r), 1e-9);
        agrees(&e, rat_interval(&mut r), rat_interval(&mut r), Rational::new(1, 1000));
    }
}
