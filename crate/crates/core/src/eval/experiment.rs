use rayon::prelude::*;

use crate::adversary::AdversaryKind;
use crate::algorithm::AlgorithmKind;
use crate::error::{Error, Result};

use super::stats::SummaryStat;
use super::trial::{run_trial_on_table, trial_table, CheckpointSchedule, Trajectory};

/// A grid of (algorithm, adversary) cells evaluated over `trials`
/// independent trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub horizon: usize,
    pub arms: usize,
    pub trials: usize,
    pub groups: usize,
    pub base_seed: u64,
    pub algorithms: Vec<AlgorithmKind>,
    pub adversaries: Vec<AdversaryKind>,
    pub schedule: CheckpointSchedule,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::invalid("horizon", "must be >= 1"));
        }
        if self.arms < 2 {
            return Err(Error::invalid("arms", "must be >= 2"));
        }
        if self.groups == 0 || self.trials == 0 || self.trials % self.groups != 0 {
            return Err(Error::invalid(
                "groups",
                format!("{} groups do not divide {} trials", self.groups, self.trials),
            ));
        }
        if self.algorithms.is_empty() || self.adversaries.is_empty() {
            return Err(Error::invalid("grid", "need at least one algorithm and one adversary"));
        }
        Ok(())
    }
}

/// Results of one (algorithm, adversary) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub algorithm: AlgorithmKind,
    pub adversary: AdversaryKind,
    /// Indexed by trial.
    pub trajectories: Vec<Trajectory>,
    /// One entry per checkpoint round.
    pub summary: Vec<(usize, SummaryStat)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    /// Adversary-major, then algorithm, in configuration order.
    pub cells: Vec<CellResult>,
}

impl ExperimentResult {
    pub fn cell(&self, algorithm: &str, adversary: &str) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.algorithm.name() == algorithm && c.adversary.name() == adversary)
    }
}

/// Runs every trial (in parallel on the current rayon pool) and aggregates
/// each checkpoint across trials. Trials are keyed by index, so the output
/// does not depend on scheduling or thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let per_trial: Vec<Vec<Trajectory>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| run_one_trial(config, trial))
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    let mut slot = 0;
    for adversary in &config.adversaries {
        for algorithm in &config.algorithms {
            let trajectories: Vec<Trajectory> = per_trial.iter().map(|t| t[slot].clone()).collect();
            let summary = summarize(&trajectories, config.groups)?;
            cells.push(CellResult {
                algorithm: *algorithm,
                adversary: *adversary,
                trajectories,
                summary,
            });
            slot += 1;
        }
    }
    Ok(ExperimentResult { cells })
}

/// Same as [`run_experiment`] on a dedicated pool of `threads` workers
/// (0 = rayon's default).
pub fn run_experiment_with_threads(config: &ExperimentConfig, threads: usize) -> Result<ExperimentResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid("threads", e.to_string()))?;
    pool.install(|| run_experiment(config))
}

fn run_one_trial(config: &ExperimentConfig, trial: u64) -> Result<Vec<Trajectory>> {
    let mut out = Vec::with_capacity(config.adversaries.len() * config.algorithms.len());
    for adversary in &config.adversaries {
        let table = trial_table(adversary, config.horizon, config.arms, config.base_seed, trial)?;
        for algorithm in &config.algorithms {
            out.push(run_trial_on_table(
                algorithm,
                adversary,
                &table,
                config.base_seed,
                trial,
                &config.schedule,
            )?);
        }
    }
    Ok(out)
}

/// Per-checkpoint median-of-means and GMD split of regret across trials.
pub fn summarize(trajectories: &[Trajectory], groups: usize) -> Result<Vec<(usize, SummaryStat)>> {
    let Some(first) = trajectories.first() else {
        return Ok(Vec::new());
    };
    first
        .checkpoints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let regrets: Vec<f64> = trajectories.iter().map(|t| t.checkpoints[i].regret).collect();
            Ok((c.round, SummaryStat::from_samples(&regrets, groups)?))
        })
        .collect()
}
