//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use privband::eval::CheckpointSchedule;

use crate::config::{parse_schedule, OutputFormat, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "privband", version, about = "Private adversarial bandit experiments and bound calculators")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm against one adversary
    Run,
    /// Run every algorithm against every adversary
    Experiment,
    /// Print privacy and regret bounds for the configured parameters
    Budget,
    /// Draw regret curves from a summary CSV, one SVG per adversary
    Plot {
        /// Summary table written by `run` or `experiment`
        summary: PathBuf,
    },
    /// Write one trial's gain table for the configured adversary
    DumpAdversary {
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
}

/// Flags shared by every subcommand. Each overrides the config file.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Flat `key = value` config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Number of rounds T
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Number of arms K
    #[arg(long, global = true)]
    pub arms: Option<usize>,
    /// Number of independent trials N
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Median-of-means groups; must divide the trial count
    #[arg(long, global = true)]
    pub groups: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub adversary: Option<String>,
    #[arg(long, global = true)]
    pub algorithm: Option<String>,
    /// DP-EXP3-Lap privacy level
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Target delta; with --epsilon selects EXP3_tau's block length
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// EXP3_tau block length
    #[arg(long, global = true)]
    pub tau: Option<usize>,
    /// Exploration rate, overriding the tuned value
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// DP-EXP3-Lap acceptance threshold b
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    #[arg(long, global = true)]
    pub spread: Option<f64>,
    #[arg(long, global = true)]
    pub period: Option<usize>,
    #[arg(long, global = true)]
    pub walk_std: Option<f64>,
    #[arg(long, global = true)]
    pub gap: Option<f64>,
    /// Zero-based index of the best arm
    #[arg(long, global = true)]
    pub best_arm: Option<usize>,
    /// geometric, every:N or list:r1,r2,...
    #[arg(long, global = true, value_parser = parse_schedule)]
    pub checkpoints: Option<CheckpointSchedule>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

impl Flags {
    /// Defaults, then the config file (if any), then these flags.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            cfg.apply_file_text(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        }
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$field = v.clone(); })*
            };
        }
        macro_rules! take_opt {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$field = Some(v.clone()); })*
            };
        }
        take!(horizon, arms, trials, groups, seed, adversary, algorithm, spread, period, best_arm, checkpoints, out_dir, format);
        take_opt!(epsilon, delta, tau, gamma, threshold, walk_std, gap);
        Ok(cfg)
    }
}

/// Worker count from `PRIVBAND_THREADS`; unset or 0 means automatic.
pub fn threads_from_env() -> CliResult<usize> {
    match std::env::var("PRIVBAND_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("PRIVBAND_THREADS must be a non-negative integer, got `{v}`"))),
        _ => Ok(0),
    }
}
