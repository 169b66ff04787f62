//! `stable-cover`: stable reduction of `z^p = x(x-1)^β(x-λ)^γ` from the command line.
//!
//! Exit codes: 0 success, 2 insufficient precision, 3 invalid input,
//! 4 construction mismatch or failed validation.

mod report;
mod run;
mod selftest;
mod sweep;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use stable_cover::padic::DEFAULT_PRECISION_UNITS;

use report::{Input, RunReport};
use run::Failure;

#[derive(Parser, Debug)]
#[command(name = "stable-cover", version, about = "Stable reduction of p-cyclic covers branched at four points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Working precision in p-adic digits.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_UNITS)]
    precision: u32,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Let the model builder enlarge R' when a root turns out to be missing.
    #[arg(long, global = true)]
    allow_extension: bool,
    /// Report wall-clock time (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Debug, Clone)]
struct Standard {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    beta: u32,
    #[arg(long)]
    gamma: u32,
    /// Token such as `5`, `tau^2`, `3+pi`, `p^3/2`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduction type only.
    Classify(Standard),
    /// Full stable model with validation.
    Model(Standard),
    /// The family z^p = (x-c1)^{p-1}(x+c1)(x-c2)^{p-1}(x+c2).
    Qwerty {
        #[arg(long)]
        p: u32,
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
    },
    /// Legendre curve y^2 = x(x-1)(x-λ) over the 2-adics.
    Deuring {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Models over all admissible (β, γ) for the given primes and λ list.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long)]
        beta: Option<u32>,
        #[arg(long)]
        gamma: Option<u32>,
        /// Comma-separated tokens; `p` stands for the prime of each row.
        #[arg(long, default_value = "2,3,p,p^2,tau^2,p^3", allow_hyphen_values = true)]
        lambdas: String,
        #[arg(long, default_value_t = 4)]
        threads: usize,
    },
    /// Oracle-equivalence suites.
    Selftest,
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
    } else {
        print!("{}", text());
    }
}

fn fail(json: bool, e: &Failure) -> ExitCode {
    if json {
        eprintln!("{}", serde_json::to_string(&e.to_json()).expect("error serializes"));
    } else {
        eprintln!("error ({}): {}", e.kind(), e);
    }
    ExitCode::from(e.exit_code())
}

fn finish(cli: &Cli, r: Result<RunReport, Failure>, start: Instant) -> ExitCode {
    match r {
        Ok(mut r) => {
            if cli.timing {
                r.ms = Some(start.elapsed().as_millis() as u64);
            }
            emit(cli.json, &r, || r.text());
            if r.all_checks_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => fail(cli.json, &e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let base = |command: &str, p: u32| Input {
        command: command.into(),
        p,
        precision: cli.precision,
        allow_extension: cli.allow_extension,
        ..Input::default()
    };
    match &cli.command {
        Command::Classify(s) | Command::Model(s) => {
            let build = matches!(cli.command, Command::Model(_));
            let input = Input {
                beta: Some(s.beta),
                gamma: Some(s.gamma),
                lambda: Some(s.lambda.clone()),
                ..base(if build { "model" } else { "classify" }, s.p)
            };
            finish(&cli, run::run_standard(&input, build), start)
        }
        Command::Qwerty { p, c1, c2 } => {
            let input = Input {
                c1: Some(c1.clone()),
                c2: Some(c2.clone()),
                ..base("qwerty", *p)
            };
            finish(&cli, run::run_qwerty(&input), start)
        }
        Command::Deuring { lambda } => match run::run_deuring(lambda, cli.precision) {
            Ok(r) => {
                emit(cli.json, &r, || r.text());
                ExitCode::SUCCESS
            }
            Err(e) => fail(cli.json, &e),
        },
        Command::Sweep {
            p,
            beta,
            gamma,
            lambdas,
            threads,
        } => {
            let list: Vec<String> = lambdas
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            let points = sweep::grid(p, *beta, *gamma, &list);
            let r = sweep::sweep(&points, cli.precision, cli.allow_extension, *threads);
            emit(cli.json, &r, || r.text());
            if r.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Command::Selftest => {
            let suites = selftest::run_all();
            emit(cli.json, &suites, || {
                suites
                    .iter()
                    .map(|s| format!("{:<32} {}  {}\n", s.name, if s.passed { "PASS" } else { "FAIL" }, s.detail))
                    .collect()
            });
            if suites.iter().all(|s| s.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
    }
}
