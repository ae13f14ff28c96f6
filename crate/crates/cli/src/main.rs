//! `qhedge`: solve interactive-measurement SDPs, compose tests in parallel,
//! evaluate strategies and run the hedging demonstration.
//!
//! Exit codes: 0 success, 2 bad usage / unparsable input / invalid query,
//! 3 invalid test or channel (including dimension mismatch and unknown
//! outcome), 4 solver did not converge or certification failed, 5 composite
//! dimension over the cap, 6 demo assertion failed.

mod commands;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use qhedge::sdp::Sense;
use serde_json::Value;

use commands::{exit, Failure, Model, Settings};
use report::{ErrorInfo, RunReport};

#[derive(Debug, Parser)]
#[command(
    name = "qhedge",
    version,
    about = "Quantum hedging in interactive proofs: SDP solver and tools"
)]
struct Cli {
    /// Duality-gap and residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 200)]
    max_iter: usize,
    /// Seed for the random-strategy cross-check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extreme probability of one outcome over all channel strategies.
    Solve {
        file: PathBuf,
        #[arg(long)]
        outcome: String,
        #[arg(long, value_parser = parse_sense)]
        sense: Sense,
    },
    /// Compose two tests run in parallel and write the result.
    Product {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Outcome probabilities of a test under a given channel.
    Eval {
        file: PathBuf,
        channel: PathBuf,
        /// A label, or `all`.
        #[arg(long, default_value = "all")]
        outcome: String,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Threshold bound on passing at least `t` of `k` parallel tests.
    Bound {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum)]
        model: Model,
    },
    /// Write the bundled example tests and channels into a directory.
    Fixtures { dir: PathBuf },
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// Two parallel runs of the hedging test never both fail.
    Hedging,
}

fn parse_sense(s: &str) -> Result<Sense, String> {
    s.parse().map_err(|_| format!("expected `max` or `min`, got {s:?}"))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let settings = Settings {
        tol: cli.tol,
        max_iter: cli.max_iter,
        seed: cli.seed,
    };

    let mut inputs = Vec::new();
    let outcome = run(&cli.command, settings, &mut inputs);

    let (result, error, code) = match outcome {
        Ok(v) => (v, None, exit::OK),
        Err(f) => (
            f.result,
            Some(ErrorInfo {
                kind: f.kind.to_string(),
                message: f.message,
            }),
            f.code,
        ),
    };
    let report = RunReport {
        command: argv,
        inputs,
        status: if code == exit::OK { "ok" } else { "error" },
        exit_code: code,
        result,
        error,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    // a closed pipe on the reader's side is not our failure
    let _ = if cli.json {
        writeln!(io::stdout(), "{}", report.to_json())
    } else if code == exit::OK {
        write!(io::stdout(), "{}", report.to_human())
    } else {
        write!(io::stderr(), "{}", report.to_human())
    };
    ExitCode::from(code as u8)
}

fn run(command: &Command, s: Settings, inputs: &mut Vec<report::InputDigest>) -> Result<Value, Failure> {
    match command {
        Command::Solve { file, outcome, sense } => {
            let input = commands::read_input(file)?;
            inputs.push(input.digest.clone());
            commands::solve_cmd(s, &input, file, outcome, *sense)
        }
        Command::Product { file1, file2, out } => {
            let a = commands::read_input(file1)?;
            inputs.push(a.digest.clone());
            let b = commands::read_input(file2)?;
            inputs.push(b.digest.clone());
            commands::product_cmd([(&a, file1), (&b, file2)], out)
        }
        Command::Eval { file, channel, outcome } => {
            let t = commands::read_input(file)?;
            inputs.push(t.digest.clone());
            let c = commands::read_input(channel)?;
            inputs.push(c.digest.clone());
            commands::eval_cmd((&t, file), (&c, channel), outcome)
        }
        Command::Demo { which: Demo::Hedging } => commands::demo_hedging_cmd(s),
        Command::Bound { k, t, p, model } => commands::bound_cmd(*k, *t, *p, *model),
        Command::Fixtures { dir } => commands::fixtures_cmd(dir),
    }
}
