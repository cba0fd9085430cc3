//! The `privband` command-line tool as a library, so the pieces can be
//! tested without spawning processes.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod number;
pub mod output;
pub mod plot;

pub use error::{CliError, CliResult};

use cli::{Cli, Command};

/// Executes a parsed command line, printing what was written.
pub fn run(cli: &Cli, threads: usize) -> CliResult<()> {
    let config = cli.flags.resolve()?;
    let report = |paths: Vec<std::path::PathBuf>| {
        for p in paths {
            println!("wrote {}", p.display());
        }
    };
    match &cli.command {
        Command::Run => report(commands::cmd_run(&config, threads)?),
        Command::Experiment => report(commands::cmd_experiment(&config, threads)?),
        Command::Budget => print!("{}", commands::cmd_budget(&config, cli.flags.format)?),
        Command::Plot { summary } => report(commands::cmd_plot(summary, &config.out_dir)?),
        Command::DumpAdversary { trial } => report(vec![commands::cmd_dump_adversary(&config, *trial)?]),
    }
    Ok(())
}
