use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rigor::algorithms::{
    brouwer_check, bsa_range, interval_newton, itra, BrouwerVerdict, BsaOutcome, ExprFn, NewtonOptions,
    NewtonOutcome,
};
use rigor::expr::{eval_iv, parse, EvalContext, Expr};
use rigor::machine::{parse_program, run, trace, MachineOutcome};
use rigor::scalar::parse_rational;
use rigor::{Interval, Rational, Round, Scalar};

const EXIT_ERROR: u8 = 2;
const EXIT_NO_SOLUTION: u8 = 3;
const EXIT_FAILURE: u8 = 4;
const EXIT_BUDGET: u8 = 5;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Backend {
    F64,
    Rat,
}

/// Validated numerics with interval arithmetic.
///
/// Exit codes: 0 success, 2 error, 3 no solution, 4 failure or undefined
/// or inconclusive, 5 budget exhausted.
#[derive(Debug, Parser)]
#[command(name = "rigor", version)]
struct Cli {
    /// Endpoint arithmetic.
    #[arg(long, value_enum, global = true, env = "RIGOR_BACKEND", default_value = "f64")]
    backend: Backend,
    /// Width budget for elementary functions.
    #[arg(long, global = true, default_value = "1e-9")]
    tol: String,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Include hexadecimal endpoints in JSON (floating-point backends).
    #[arg(long, global = true)]
    hex: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Domain {
    /// Interval for the variable, e.g. "[1,2]".
    #[arg(short = 'x', long = "domain", allow_hyphen_values = true)]
    domain: String,
    /// Name of the variable.
    #[arg(long, default_value = "x")]
    var: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Natural interval extension of an expression.
    Eval {
        expr: String,
        /// Interval for `x`.
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: Option<String>,
        /// Further bindings, `name=[lo,hi]`.
        #[arg(long = "bind", allow_hyphen_values = true)]
        bind: Vec<String>,
    },
    /// Range enclosure by bisection.
    Range {
        expr: String,
        #[command(flatten)]
        domain: Domain,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value = "1e6", value_parser = count)]
        max_steps: u64,
        /// Include every piece of the covering in the output.
        #[arg(long)]
        covering: bool,
    },
    /// Interval Newton method.
    Solve {
        expr: String,
        #[command(flatten)]
        domain: Domain,
        #[arg(long, default_value = "1e-12")]
        width: String,
        #[arg(long, default_value = "1e3", value_parser = count)]
        max_iter: u64,
    },
    /// Interval trapezoidal rule.
    Integrate {
        expr: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "1024", value_parser = count)]
        n: u64,
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Fixed-point test: is F(I) strictly inside I?
    Brouwer {
        expr: String,
        #[command(flatten)]
        domain: Domain,
    },
    /// Interval machine programs.
    Machine {
        #[command(subcommand)]
        command: MachineCommand,
    },
}

#[derive(Debug, Subcommand)]
enum MachineCommand {
    /// Run a program file.
    Run {
        file: PathBuf,
        /// Input intervals in declaration order.
        #[arg(long = "in", num_args = 1..)]
        inputs: Vec<String>,
        #[arg(long, default_value = "1e6", value_parser = count)]
        max_steps: u64,
        /// Print the state after every step as JSON lines first.
        #[arg(long)]
        trace: bool,
    },
}

fn count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(e: impl Display) -> Failure {
    Failure {
        code: EXIT_ERROR,
        message: e.to_string(),
    }
}

/// A positive scalar from decimal text, rounded down.
fn positive<T: Scalar>(text: &str, what: &str) -> Result<T, Failure> {
    let q = parse_rational(text).map_err(|_| fail(format!("{what} `{text}` is not a number")))?;
    let v = T::from_rational(&q, Round::Down).map_err(fail)?;
    if v <= T::zero() {
        return Err(fail(format!("{what} must be positive")));
    }
    Ok(v)
}

fn interval<T: Scalar>(text: &str) -> Result<Interval<T>, Failure> {
    Interval::parse(text).map_err(|e| fail(format!("bad interval `{text}`: {e}")))
}

fn expression(text: &str) -> Result<Expr, Failure> {
    parse(text).map_err(fail)
}

struct Out {
    json: bool,
    hex: bool,
}

impl Out {
    fn iv<T: Scalar>(&self, x: &Interval<T>) -> Value {
        serde_json::to_value(x.to_repr(self.hex)).expect("interval reprs serialize")
    }

    fn emit(&self, human: String, value: Value) {
        if self.json {
            println!("{value}");
        } else {
            println!("{human}");
        }
    }
}

fn execute<T: Scalar>(cli: &Cli) -> Result<u8, Failure> {
    let out = Out {
        json: cli.json,
        hex: cli.hex,
    };
    let tol: T = positive(&cli.tol, "--tol")?;
    let ctx = EvalContext::new(tol);
    match &cli.command {
        Command::Eval { expr, x, bind } => {
            let e = expression(expr)?;
            let mut ctx = ctx;
            if let Some(x) = x {
                ctx.set("x", interval(x)?);
            }
            for b in bind {
                let (name, iv) = b
                    .split_once('=')
                    .ok_or_else(|| fail(format!("binding `{b}` is not of the form name=[lo,hi]")))?;
                ctx.set(name.trim(), interval(iv)?);
            }
            let y = eval_iv(&e, &ctx).map_err(fail)?;
            out.emit(y.to_string(), json!({ "result": out.iv(&y) }));
            Ok(0)
        }
        Command::Range {
            expr,
            domain,
            eps,
            max_steps,
            covering,
        } => {
            let e = expression(expr)?;
            let d = interval::<T>(&domain.domain)?;
            let eps: T = positive(eps, "--eps")?;
            let f = ExprFn::new(&e, &domain.var, &ctx);
            match bsa_range(&f, &d, &eps, *max_steps) {
                BsaOutcome::Success {
                    range,
                    covering: cov,
                    bisections,
                } => {
                    let mut v = json!({
                        "outcome": "success",
                        "range": out.iv(&range),
                        "pieces": cov.len(),
                        "bisections": bisections,
                    });
                    let mut human = format!("range {range}\npieces {}\nbisections {bisections}", cov.len());
                    if *covering {
                        v["covering"] = serde_json::to_value(cov.to_repr(out.hex)).map_err(fail)?;
                        for p in &cov.pieces {
                            human.push_str(&format!("\n{} -> {}", p.piece, p.enclosure));
                        }
                    }
                    out.emit(human, v);
                    Ok(0)
                }
                BsaOutcome::Failure {
                    piece,
                    reason,
                    bisections,
                } => {
                    out.emit(
                        format!("failure: cannot split {piece}: {reason}"),
                        json!({
                            "outcome": "failure",
                            "piece": out.iv(&piece),
                            "reason": reason,
                            "bisections": bisections,
                        }),
                    );
                    Ok(EXIT_FAILURE)
                }
                BsaOutcome::Budget { bisections, pending } => {
                    out.emit(
                        format!("budget exhausted after {bisections} bisections, {pending} pieces pending"),
                        json!({ "outcome": "budget", "bisections": bisections, "pending": pending }),
                    );
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Solve {
            expr,
            domain,
            width,
            max_iter,
        } => {
            let e = expression(expr)?;
            let x0 = interval::<T>(&domain.domain)?;
            let opts = NewtonOptions {
                width_goal: positive(width, "--width")?,
                max_iter: u32::try_from(*max_iter).map_err(fail)?,
                ctx,
            };
            let outcome = interval_newton(&e, &domain.var, &x0, &opts).map_err(fail)?;
            Ok(match outcome {
                NewtonOutcome::SolutionFound { enclosure, iterations } => {
                    out.emit(
                        format!("unique zero in {enclosure}\niterations {iterations}"),
                        json!({
                            "outcome": "solution_found",
                            "enclosure": out.iv(&enclosure),
                            "iterations": iterations,
                        }),
                    );
                    0
                }
                NewtonOutcome::NoSolution { iterations } => {
                    out.emit(
                        format!("no zero in {x0}\niterations {iterations}"),
                        json!({ "outcome": "no_solution", "iterations": iterations }),
                    );
                    EXIT_NO_SOLUTION
                }
                NewtonOutcome::Failure { reason, iterations } => {
                    out.emit(
                        format!("failure: {reason}\niterations {iterations}"),
                        json!({ "outcome": "failure", "reason": reason, "iterations": iterations }),
                    );
                    EXIT_FAILURE
                }
                NewtonOutcome::Budget { last, iterations } => {
                    out.emit(
                        format!("budget exhausted at {last}\niterations {iterations}"),
                        json!({ "outcome": "budget", "last": out.iv(&last), "iterations": iterations }),
                    );
                    EXIT_BUDGET
                }
            })
        }
        Command::Integrate { expr, a, b, n, var } => {
            let e = expression(expr)?;
            let bound = |s: &str| -> Result<T, Failure> {
                let x = Interval::<T>::parse_exact(s)
                    .map_err(|err| fail(format!("integration bound `{s}`: {err}")))?;
                if !x.is_degenerate() {
                    return Err(fail(format!("integration bound `{s}` must be a number")));
                }
                Ok(x.lo().clone())
            };
            let (a, b) = (bound(a)?, bound(b)?);
            let f = ExprFn::new(&e, var, &ctx);
            let j = itra(&f, &a, &b, *n).map_err(fail)?;
            out.emit(j.to_string(), json!({ "result": out.iv(&j), "n": n }));
            Ok(0)
        }
        Command::Brouwer { expr, domain } => {
            let e = expression(expr)?;
            let d = interval::<T>(&domain.domain)?;
            let rep = brouwer_check(&e, &domain.var, &d, &ctx).map_err(fail)?;
            let (name, code) = match rep.verdict {
                BrouwerVerdict::FixedPointExists => ("fixed_point_exists", 0),
                BrouwerVerdict::Inconclusive => ("inconclusive", EXIT_FAILURE),
            };
            out.emit(
                format!("{}\nimage {}", name.replace('_', " "), rep.image),
                json!({ "verdict": name, "image": out.iv(&rep.image) }),
            );
            Ok(code)
        }
        Command::Machine {
            command:
                MachineCommand::Run {
                    file,
                    inputs,
                    max_steps,
                    trace: with_trace,
                },
        } => {
            let src = std::fs::read_to_string(file).map_err(|e| fail(format!("{}: {e}", file.display())))?;
            let p = parse_program::<T>(&src).map_err(fail)?;
            let xs = inputs.iter().map(|s| interval(s)).collect::<Result<Vec<_>, _>>()?;
            let outcome = if *with_trace {
                let (log, outcome) = trace(&p, &xs, *max_steps).map_err(fail)?;
                for entry in &log {
                    println!("{}", serde_json::to_string(entry).map_err(fail)?);
                }
                outcome
            } else {
                run(&p, &xs, *max_steps).map_err(fail)?
            };
            Ok(match outcome {
                MachineOutcome::Halted(vals) => {
                    let human = vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
                    let reprs: Vec<_> = vals.iter().map(|v| out.iv(v)).collect();
                    out.emit(human, json!({ "outcome": "halted", "outputs": reprs }));
                    0
                }
                MachineOutcome::Undefined { reason, node } => {
                    out.emit(
                        format!("undefined at {}: {reason}", p.label(node)),
                        json!({ "outcome": "undefined", "reason": reason, "node": node }),
                    );
                    EXIT_FAILURE
                }
                MachineOutcome::StepBudgetExceeded => {
                    out.emit(
                        format!("step budget of {max_steps} exceeded"),
                        json!({ "outcome": "step_budget_exceeded" }),
                    );
                    EXIT_BUDGET
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.backend {
        Backend::F64 => execute::<f64>(&cli),
        Backend::Rat => execute::<Rational>(&cli),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, message }) => {
            if cli.json {
                println!("{}", json!({ "error": message }));
            }
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
