use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use reskit_cli::{run, Command};

/// Resonance-zone analysis of forced near-integrable oscillators.
#[derive(Debug, Parser)]
#[command(name = "reskit", version)]
struct Args {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command, &args.config, &args.out) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("reskit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
