//! Command-line front end: simulate growth models, estimate attachment
//! functions from snapshots or traces, fit parametric forms, and run
//! consistency diagnostics.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.
//! Identical flags and seed always produce byte-identical output files,
//! regardless of thread count. Progress and summaries go to standard
//! error; standard output carries data only when an output path is `-`.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Errors carrying a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag combination or parameter (exit 2).
    Usage(String),
    /// Library-level failure (exit 3 or 4 depending on the kind).
    Core(paoneshot_core::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<paoneshot_core::Error> for CliError {
    fn from(e: paoneshot_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(paoneshot_core::Error::Io(e))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use paoneshot_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::InvalidParameter(_)) => 2,
            CliError::Core(E::Parse { .. } | E::Io(_) | E::Serialization(_)) => 3,
            CliError::Core(E::InsufficientData(_)) => 3,
            CliError::Core(E::Numeric(_)) => 4,
        }
    }
}

fn thread_cap(cli: &Cli) -> Option<usize> {
    cli.threads.or_else(|| {
        std::env::var("PAONESHOT_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = thread_cap(&cli) {
        // Ignore failure: the global pool can only be configured once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(&args),
        Command::Estimate(args) => commands::estimate(&args),
        Command::Fit(args) => commands::fit(&args),
        Command::Diagnose(args) => commands::diagnose(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
