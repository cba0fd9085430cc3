use std::process::ExitCode;

use clap::Parser;
use privband_cli::cli::{threads_from_env, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match threads_from_env().and_then(|threads| privband_cli::run(&cli, threads)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("privband: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
