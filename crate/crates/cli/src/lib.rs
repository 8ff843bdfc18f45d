//! Command dispatch for the `recsunit` binary.
//!
//! Exit status: 0 on success, 1 on diagnostics (bad input, limits), 2 when a
//! recurrence violates the hypotheses a computation needs.

use std::fs;

use clap::{Parser, Subcommand};
use serde_json::json;

use recsunit::error::Error;
use recsunit::places::{divisor, height, is_s_unit, valuation, Place};
use recsunit::problem::{parse_problem, parse_sset, Diagnostic, ProblemFile};
use recsunit::ratfunc::parse_ratfunc;
use recsunit::report::{self, to_json};
use recsunit::selfcheck::{self, DEFAULT_CASES, DEFAULT_SEED};
use recsunit::RatFunc;

#[derive(Parser, Debug)]
#[command(name = "recsunit", version, about = "Heights, S-units and recurrence equations over Q(x)")]
pub struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Height max(deg num, deg den) of a rational function.
    Height { f: String },
    /// Valuation of a function at a place (`inf` or a polynomial).
    Valuation { f: String, place: String },
    /// Zeros and poles of a function.
    Divisor { f: String },
    /// Whether a function is an S-unit for the set in FILE.
    Sunit {
        f: String,
        #[arg(long, value_name = "FILE")]
        sset: String,
    },
    /// Bound trace of a problem file.
    Bound { file: String },
    /// Bound, enumeration and families for a problem file.
    Solve { file: String },
    /// Brute force up to N in every exponent.
    Oracle {
        file: String,
        #[arg(long, value_name = "N")]
        max: u64,
    },
    /// Seeded height and divisor property suites.
    Selfcheck {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CASES)]
        cases: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

struct Failure {
    code: i32,
    machine: serde_json::Value,
    text: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Hypothesis(report) => Failure {
                code: 2,
                machine: json!({ "error": "hypothesis", "report": *report }),
                text: format!("hypothesis violation\n{report}"),
            },
            other => Failure {
                code: 1,
                machine: json!({ "error": "diagnostic", "message": other.to_string() }),
                text: other.to_string(),
            },
        }
    }
}

impl From<Diagnostic> for Failure {
    fn from(d: Diagnostic) -> Failure {
        Failure {
            code: 1,
            machine: json!({
                "error": "diagnostic",
                "kind": d.kind.to_string(),
                "line": d.line,
                "column": d.column,
                "message": d.message,
            }),
            text: d.to_string(),
        }
    }
}

fn io_failure(path: &str, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        machine: json!({ "error": "io", "message": format!("{path}: {e}") }),
        text: format!("{path}: {e}"),
    }
}

fn arg_ratfunc(text: &str) -> Result<RatFunc, Failure> {
    parse_ratfunc(text).map_err(|e| Failure {
        code: 1,
        machine: json!({
            "error": "diagnostic",
            "kind": "syntax error",
            "column": e.offset + 1,
            "message": e.message,
        }),
        text: format!("column {}: syntax error: {}", e.offset + 1, e.message),
    })
}

fn load_problem(path: &str) -> Result<ProblemFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_problem(&text).map_err(|d| {
        let mut f = Failure::from(d);
        f.text = format!("{path}: {}", f.text);
        f
    })
}

fn emit<T: serde::Serialize + std::fmt::Display>(machine: bool, doc: &T) -> String {
    if machine {
        to_json(doc)
    } else {
        format!("{doc}")
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let machine = cli.machine;
    let out = match &cli.command {
        Command::Height { f } => {
            let g = arg_ratfunc(f)?;
            let h = height(&g)?;
            if machine {
                to_json(&json!({ "function": g.to_string(), "height": h }))
            } else {
                format!("{h}\n")
            }
        }
        Command::Valuation { f, place } => {
            let g = arg_ratfunc(f)?;
            let p = Place::parse(place)?;
            let v = valuation(&g, &p)?;
            if machine {
                to_json(&json!({ "function": g.to_string(), "place": p.to_string(), "valuation": v }))
            } else {
                format!("{v}\n")
            }
        }
        Command::Divisor { f } => {
            let g = arg_ratfunc(f)?;
            let d = divisor(&g)?;
            if machine {
                let entries: Vec<_> = d
                    .entries()
                    .map(|(p, v)| json!({ "place": p.to_string(), "degree": p.degree(), "valuation": v }))
                    .collect();
                to_json(&json!({ "function": g.to_string(), "divisor": entries }))
            } else {
                format!("{d}\n")
            }
        }
        Command::Sunit { f, sset } => {
            let g = arg_ratfunc(f)?;
            let text = fs::read_to_string(sset).map_err(|e| io_failure(sset, e))?;
            let s = parse_sset(&text)?;
            let unit = is_s_unit(&g, &s);
            if machine {
                to_json(&json!({ "function": g.to_string(), "sset": s.to_string(), "s_unit": unit }))
            } else {
                format!("{unit}\n")
            }
        }
        Command::Bound { file } => emit(machine, &report::bound(&load_problem(file)?)?),
        Command::Solve { file } => emit(machine, &report::solve(&load_problem(file)?)?),
        Command::Oracle { file, max } => emit(machine, &report::oracle(&load_problem(file)?, *max)?),
        Command::Selfcheck { seed, cases } => {
            let r = selfcheck::run(*seed, *cases);
            let stdout = emit(machine, &r);
            return Ok(Outcome {
                code: if r.passed() { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            });
        }
    };
    Ok(Outcome::ok(out))
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome::ok(rendered)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    let work = || match dispatch(&cli) {
        Ok(o) => o,
        Err(f) if cli.machine => Outcome {
            code: f.code,
            stdout: to_json(&f.machine),
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.text),
        },
    };
    match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Outcome {
                code: 1,
                stdout: String::new(),
                stderr: format!("error: thread pool: {e}\n"),
            },
        },
        None => work(),
    }
}
