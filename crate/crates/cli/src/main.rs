use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use deloc_cli::{execute, Command, Options};

/// Exact verification of delocalized Riemann-Roch identities on finite scenarios.
#[derive(Debug, Parser)]
#[command(name = "deloc", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario JSON file.
    scenario: PathBuf,
    /// Truncation degree for series, overriding the scenario.
    #[arg(long)]
    trunc: Option<usize>,
    /// Emit the JSON report instead of a table.
    #[arg(long)]
    json: bool,
    /// Number of worker threads.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    parallel: Option<u16>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        trunc: cli.trunc,
        json: cli.json,
        parallel: cli.parallel.map(usize::from),
    };
    let outcome = execute(cli.command, &cli.scenario, &opts);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
