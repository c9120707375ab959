//! `qhyp`: runs verification jobs against the q-difference equations of
//! `qhyp-core` and prints newline-delimited JSON reports.
//!
//! Exit codes: 0 when every check passes, 1 on a failed or unevaluable
//! check, 2 on invalid input.

mod commands;
mod job;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use job::{Command, Input, InputError, Job, JobSpec, Overrides};

#[derive(Parser)]
#[command(name = "qhyp", version, about = "Verification reports for q-hypergeometric equations")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Characteristic roots, compared with the expected configuration.
    Config(Args),
    /// Residuals of solution families under their equation.
    Verify(Args),
    /// Cocycle, relation matrix, group relations, Casoratians, Heine constant.
    Relations(Args),
    /// Degenerations of operators along a scale sequence.
    Limits(Args),
    /// CSV of |f(x)| along the positive real axis.
    Sample(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON job file.
    #[arg(long)]
    job: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run on the parameters as given, even if they break the balance condition.
    #[arg(long)]
    no_balance_check: bool,
}

fn run(cmd: Command, args: &Args) -> Input<(String, i32)> {
    let o = Overrides { seed: args.seed, samples: args.samples, no_balance_check: args.no_balance_check };
    let job = Job::new(cmd, JobSpec::load(&args.job)?, o)?;
    let report = match cmd {
        Command::Config => commands::config(&job)?,
        Command::Verify => commands::verify(&job)?,
        Command::Relations => commands::relations(&job)?,
        Command::Limits => commands::limits(&job)?,
        Command::Sample => return Ok((commands::sample(&job)?, 0)),
    };
    Ok((report.render(cmd.name()), report.exit_code()))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Input<()> {
    let res = match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    res.map_err(InputError)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match &cli.command {
        Cmd::Config(a) => (Command::Config, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Relations(a) => (Command::Relations, a),
        Cmd::Limits(a) => (Command::Limits, a),
        Cmd::Sample(a) => (Command::Sample, a),
    };
    match run(cmd, args).and_then(|(text, code)| emit(&text, args.out.as_ref()).map(|_| code)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
