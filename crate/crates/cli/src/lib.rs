//! Command-line front end: configuration, commands and output formatting.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

use std::path::Path;

use clap::ValueEnum;

use config::Validated;
use error::{CliError, CliResult};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "RESKIT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Genfun,
    Resonance,
    Portrait,
    Melnikov,
    Simulate,
    Sweep,
}

fn worker_count(cfg: &Validated) -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "{THREADS_ENV} must be a positive integer, got `{s}`"
            ))),
        },
        Err(_) => Ok(cfg.raw.threads),
    }
}

/// Runs one command on the configuration text and returns the output files.
pub fn execute(command: Command, text: &str) -> CliResult<Vec<commands::Output>> {
    let cfg = Validated::parse(text)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count(&cfg)? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match command {
        Command::Genfun => commands::genfun(&cfg),
        Command::Resonance => commands::resonance(&cfg),
        Command::Portrait => commands::portrait(&cfg),
        Command::Melnikov => commands::melnikov(&cfg),
        Command::Simulate => commands::simulate(&cfg),
        Command::Sweep => commands::sweep(&cfg),
    })
}

/// Reads the configuration, runs the command and writes its files into `out`.
pub fn run(command: Command, config: &Path, out: &Path) -> CliResult<Vec<std::path::PathBuf>> {
    let text = std::fs::read_to_string(config).map_err(|source| CliError::Io {
        path: config.display().to_string(),
        source,
    })?;
    let files = execute(command, &text)?;
    std::fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.display().to_string(),
        source,
    })?;
    files
        .into_iter()
        .map(|(name, contents)| format::write_file(out, name, &contents))
        .collect()
}
