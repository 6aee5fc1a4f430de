//! Scenario loading, command dispatch and report rendering for the `deloc` binary.

pub mod commands;
pub mod parse;
pub mod report;
pub mod scenario;

use std::path::Path;

pub use commands::{run, Command, RunError};
pub use parse::{parse_cyclotomic, ParseError};
pub use report::{Check, Report, Row};
pub use scenario::{load_bytes, load_scenario, LoadError, Scenario};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub trunc: Option<usize>,
    pub json: bool,
    /// Worker threads; `None` uses the global pool.
    pub parallel: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn error(message: String) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            report: None,
        }
    }
}

pub fn execute(command: Command, path: &Path, opts: &Options) -> Outcome {
    match opts.parallel {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute_here(command, path, opts)),
            Err(e) => Outcome::error(format!("cannot start {n} workers: {e}")),
        },
        None => execute_here(command, path, opts),
    }
}

fn execute_here(command: Command, path: &Path, opts: &Options) -> Outcome {
    let sc = match load_scenario(path, opts.trunc) {
        Ok(sc) => sc,
        Err(e) => return Outcome::error(format!("load error: {e}")),
    };
    let checks = match run(command, &sc) {
        Ok(c) => c,
        Err(e) => return Outcome::error(e.to_string()),
    };
    let report = Report::new(command.name(), &sc.sha256, checks);
    let mut stdout = if opts.json {
        report.to_json()
    } else {
        report.to_table()
    };
    if !stdout.ends_with('\n') {
        stdout.push('\n');
    }
    let code = if report.passed { EXIT_PASS } else { EXIT_FAIL };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
        report: Some(report),
    }
}
