use std::process::{Command, Output};

use serde_json::Value;

fn rigor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigor"))
        .args(args)
        .env_remove("RIGOR_BACKEND")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = rigor(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap_or_default();
    (out.status.code().unwrap(), serde_json::from_str(last).expect(last))
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn eval_is_exact_on_rationals() {
    let (code, v) = json(&["--backend", "rat", "eval", "x^2 - 2*x", "-x", "[0,1]"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["lo"], "-2");
    assert_eq!(v["result"]["hi"], "1");
    let (_, v) = json(&["--backend", "rat", "eval", "x*y", "--bind", "x=[1/3,1/2]", "--bind", "y=[3,3]"]);
    assert_eq!(v["result"]["lo"], "1");
    assert_eq!(v["result"]["hi"], "3/2");
}

#[test]
fn eval_encloses_e() {
    let (code, v) = json(&["eval", "exp(x)", "-x", "[1,1]"]);
    assert_eq!(code, 0);
    let (lo, hi) = (num(&v["result"]["lo"]), num(&v["result"]["hi"]));
    assert!(lo <= std::f64::consts::E && std::f64::consts::E <= hi);
    assert!(hi - lo <= 1e-9);
}

#[test]
fn backend_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rigor"))
        .args(["eval", "1/3"])
        .env("RIGOR_BACKEND", "rat")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "[1/3, 1/3]");
}

#[test]
fn hex_endpoints_on_request() {
    let (_, v) = json(&["--hex", "eval", "x", "-x", "[1,2]"]);
    assert_eq!(v["result"]["lo_hex"], "0x1p+0");
    let (_, v) = json(&["eval", "x", "-x", "[1,2]"]);
    assert!(v["result"].get("lo_hex").is_none());
}

#[test]
fn range_of_square() {
    let (code, v) = json(&["--backend", "rat", "range", "x^2", "-x", "[0,1]", "--eps", "0.25", "--covering"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"], "success");
    assert_eq!(v["range"]["lo"], "0");
    assert_eq!(v["range"]["hi"], "1");
    let pieces = v["covering"]["pieces"].as_array().unwrap();
    assert_eq!(pieces.len(), 5);
}

#[test]
fn range_outcomes_have_exit_codes() {
    let (code, v) = json(&["range", "1/x", "-x", "[-1,1]", "--eps", "0.1", "--max-steps", "1000"]);
    assert_eq!((code, v["outcome"].as_str()), (5, Some("budget")));
    let (code, v) = json(&["range", "step(0.5,2,1;x)", "-x", "[0,1]", "--eps", "0.5"]);
    assert_eq!((code, v["outcome"].as_str()), (4, Some("failure")));
}

#[test]
fn solve_outcomes() {
    let (code, v) = json(&["solve", "x^2 - 2", "-x", "[1,2]"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"], "solution_found");
    let (lo, hi) = (num(&v["enclosure"]["lo"]), num(&v["enclosure"]["hi"]));
    assert!(lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= hi);
    assert!(hi - lo <= 1e-12);
    let (code, v) = json(&["solve", "x^2 - 2", "-x", "[2,3]"]);
    assert_eq!((code, v["outcome"].as_str()), (3, Some("no_solution")));
    let (code, v) = json(&["solve", "x^2 - 2", "-x", "[-2,2]"]);
    assert_eq!((code, v["outcome"].as_str()), (4, Some("failure")));
}

#[test]
fn integrate_encloses_integral() {
    let (code, v) = json(&["integrate", "exp(-x)", "0", "1", "--n", "1024"]);
    assert_eq!(code, 0);
    let exact = 1.0 - (-1.0f64).exp();
    let (lo, hi) = (num(&v["result"]["lo"]), num(&v["result"]["hi"]));
    assert!(lo <= exact && exact <= hi);
    assert!(hi - lo <= 2e-3);
    let (code, _) = json(&["integrate", "x", "0.1", "1"]);
    assert_eq!(code, 2);
    let (code, v) = json(&["--backend", "rat", "integrate", "x", "0.1", "1", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!((v["result"]["lo"].as_str(), v["result"]["hi"].as_str()), (Some("9/100"), Some("9/10")));
}

#[test]
fn brouwer_verdicts() {
    let (code, v) = json(&["brouwer", "x/2 + 0.25", "-x", "[0,1]"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("fixed_point_exists")));
    let (code, v) = json(&["brouwer", "x", "-x", "[0,1]"]);
    assert_eq!((code, v["verdict"].as_str()), (4, Some("inconclusive")));
}

#[test]
fn machine_program_from_file() {
    let f = fixture("sign.ivm");
    for (x, y, want) in [("[1,2]", "[3,4]", ("1", "1")), ("[-2,-1]", "[-1,0]", ("0", "0")), ("[-1,1]", "[0,0]", ("0", "1"))] {
        let (code, v) = json(&["machine", "run", &f, "--in", x, y]);
        assert_eq!(code, 0);
        assert_eq!(v["outcome"], "halted");
        assert_eq!((v["outputs"][0]["lo"].as_str().unwrap(), v["outputs"][0]["hi"].as_str().unwrap()), want);
    }
}

#[test]
fn machine_trace_is_json_lines() {
    let out = rigor(&["machine", "run", &fixture("sign.ivm"), "--in", "[1,2]", "[3,4]", "--trace"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let nodes: Vec<u64> = text
        .lines()
        .filter_map(|l| serde_json::from_str::<Value>(l).ok())
        .filter(|v| v.is_object())
        .map(|v| v["node"].as_u64().unwrap())
        .collect();
    assert_eq!(nodes, [0, 1, 2, 3, 5, 7]);
}

#[test]
fn machine_failures() {
    let f = fixture("sign.ivm");
    let (code, v) = json(&["machine", "run", &f, "--in", "[1,2]"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("inputs"));
    let (code, v) = json(&["machine", "run", &f, "--in", "[1,2]", "[3,4]", "--max-steps", "3"]);
    assert_eq!((code, v["outcome"].as_str()), (5, Some("step_budget_exceeded")));
    let (code, _) = json(&["machine", "run", &fixture("missing.ivm"), "--in", "[1,2]"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_input_is_an_error() {
    let out = rigor(&["eval", "x +"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
    assert_eq!(rigor(&["eval", "x", "-x", "[2,1]"]).status.code(), Some(2));
    assert_eq!(rigor(&["range", "x", "-x", "[0,1]", "--eps", "-1"]).status.code(), Some(2));
}
