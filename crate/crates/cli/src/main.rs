//! `subsmooth`: subderivative estimates, semismoothness classification,
//! the fixture suite and determination experiments from the command line.
//!
//! Every command writes a JSON report (stdout, or `--report`) and a short
//! summary to stderr. Exit codes: 0 all verdicts hold, 1 some verdict
//! fails, 2 some verdict is inconclusive, 64 usage, 65 estimation or bad
//! input data, 66 unreadable input, 74 unwritable output.

mod commands;
mod config;
mod error;
mod expr;
mod report;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{classify, determine, subderiv, verify};
use config::Overrides;
use error::{code, CliError};
use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "subsmooth", version, about = "Subderivatives, semismoothness and determination checks")]
struct Cli {
    /// key=value settings file, or a previous JSON report to replay
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides grid.tol
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Overrides grid.seed (and SUBSMOOTH_SEED)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Estimate one subderivative with tail diagnostics and its lattice position
    Subderiv(subderiv::SubderivArgs),
    /// Run every semismoothness detector at a point and direction
    Classify(classify::ClassifyArgs),
    /// Run the fixture suite
    VerifyPaper(verify::VerifyArgs),
    /// Determine f from g on a one-dimensional grid
    Determine(determine::DetermineArgs),
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let cfg = config::resolve(&Overrides {
        config: cli.config.clone(),
        tol: cli.tol,
        seed: cli.seed,
    })?;
    let (command, args, records) = match &cli.cmd {
        Cmd::Subderiv(a) => ("subderiv", a.echo(), subderiv::run(a, &cfg)?),
        Cmd::Classify(a) => ("classify", a.echo(), classify::run(a, &cfg)?),
        Cmd::VerifyPaper(a) => ("verify-paper", a.echo(), verify::run(a, &cfg)?),
        Cmd::Determine(a) => ("determine", a.echo(), determine::run(a, &cfg)?),
    };
    Ok(RunReport {
        command,
        config_echo: json!({
            "settings": config::echo(&cfg),
            "args": args,
        }),
        records,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(code::USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let out = run(&cli).and_then(|r| r.write(cli.report.as_deref()).map(|_| r.exit_code()));
    match out {
        Ok(c) => c,
        Err(e) => {
            eprintln!("subsmooth: {e}");
            e.exit_code()
        }
    }
}
