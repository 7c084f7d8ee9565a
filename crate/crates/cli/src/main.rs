//! `fsc` — fractionally-supervised classification at the command line.
//!
//! Subcommands: `fit`, `select`, `simulate`, `ari`. Every output directory
//! receives a `manifest.json` with the resolved configuration, master seed,
//! tool version and input digests, which is enough to reproduce the run
//! bit-exactly.
//!
//! Exit codes: 0 success, 1 usage or I/O problem, 2 numerical failure.

mod args;
mod commands;
mod manifest;
mod output;
mod plot;

use args::{Args, UsageError};

pub enum CliError {
    Usage(String),
    Io(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e.0)
    }
}

impl From<fsc_core::Error> for CliError {
    fn from(e: fsc_core::Error) -> Self {
        match e {
            fsc_core::Error::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

const USAGE: &str = "usage: fsc <fit|select|simulate|ari> [--flag value ...]

  fit       fit one mixture model to a CSV dataset
  select    weight/model selection over random splits of a labelled CSV
  simulate  run a synthetic replication study
  ari       adjusted Rand index between two partition files

See README.md for the full flag reference.";

fn main() {
    let mut argv = std::env::args();
    let _program = argv.next();
    let command = match argv.next() {
        Some(c) => c,
        None => {
            eprintln!("{USAGE}");
            std::process::exit(1);
        }
    };
    let raw: Vec<String> = argv.collect();
    let result = Args::parse(raw.iter().cloned())
        .map_err(CliError::from)
        .and_then(|args| dispatch(&command, args, &raw));
    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("fsc: error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}

fn dispatch(command: &str, mut args: Args, raw_argv: &[String]) -> Result<(), CliError> {
    // A bounded worker pool; all file writes stay on the main thread.
    if let Some(threads) = args.take_parse::<usize>("threads")? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))?;
    }
    match command {
        "fit" => commands::fit::run(args, raw_argv),
        "select" => commands::select::run(args, raw_argv),
        "simulate" => commands::simulate::run(args, raw_argv),
        "ari" => commands::ari::run(args),
        other => Err(CliError::Usage(format!(
            "unknown command '{other}'\n{USAGE}"
        ))),
    }
}
