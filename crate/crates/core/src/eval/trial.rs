use crate::adversary::{AdversaryKind, GainTable};
use crate::algorithm::{Agent, AlgorithmKind};
use crate::error::{Error, Result};
use crate::rng::{RngStream, StreamRole};
use crate::types::ArmIndex;

/// Best fixed arm over rounds `1..=t` of the base table and its cumulative
/// gain. Ties go to the lowest index.
pub fn fixed_oracle_cumgain(table: &GainTable, t: usize) -> Result<(ArmIndex, f64)> {
    table.check_round(t)?;
    let mut sums = vec![0.0; table.arms()];
    for s in 1..=t {
        for (acc, g) in sums.iter_mut().zip(table.row_unchecked(s)) {
            *acc += g;
        }
    }
    Ok(best_of(&sums))
}

fn best_of(sums: &[f64]) -> (ArmIndex, f64) {
    let mut best = 0;
    for (i, &s) in sums.iter().enumerate().skip(1) {
        if s > sums[best] {
            best = i;
        }
    }
    (ArmIndex(best), sums[best])
}

/// Rounds at which a trajectory is recorded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum CheckpointSchedule {
    /// `1, 2, 4, …, 2^⌊log2 T⌋` and `T`.
    #[default]
    Geometric,
    /// Every `n`-th round, plus `T`.
    Every(usize),
    /// An explicit list; rounds outside `1..=T` are dropped.
    Explicit(Vec<usize>),
}

impl CheckpointSchedule {
    /// Strictly increasing rounds in `1..=horizon`, always ending at `horizon`.
    pub fn rounds(&self, horizon: usize) -> Vec<usize> {
        let mut rounds: Vec<usize> = match self {
            CheckpointSchedule::Geometric => std::iter::successors(Some(1usize), |r| r.checked_mul(2))
                .take_while(|&r| r <= horizon)
                .collect(),
            CheckpointSchedule::Every(n) => ((*n).max(1)..=horizon).step_by((*n).max(1)).collect(),
            CheckpointSchedule::Explicit(list) => list.iter().copied().filter(|r| (1..=horizon).contains(r)).collect(),
        };
        rounds.push(horizon);
        rounds.sort_unstable();
        rounds.dedup();
        rounds
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub round: usize,
    /// Gain actually received by the agent up to `round`.
    pub cum_gain: f64,
    /// Cumulative base gain of the best fixed arm over `1..=round`.
    pub oracle_gain: f64,
    /// `oracle_gain - cum_gain`.
    pub regret: f64,
}

/// Checkpointed progress of one agent in one trial.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub checkpoints: Vec<Checkpoint>,
}

impl Trajectory {
    pub fn final_regret(&self) -> Option<f64> {
        self.checkpoints.last().map(|c| c.regret)
    }
}

/// Plays `agent` against a pregenerated table.
///
/// The agent receives [`AdversaryKind::realized_gain`] (so the switching
/// penalty applies to it); the oracle is scored on base gains, re-selecting
/// its best arm at every checkpoint.
pub fn play<A: Agent + ?Sized>(
    agent: &mut A,
    adversary: &AdversaryKind,
    table: &GainTable,
    schedule: &CheckpointSchedule,
) -> Result<Trajectory> {
    let horizon = table.horizon();
    let arms = table.arms();
    let rounds = schedule.rounds(horizon);
    let mut next = rounds.iter().copied().peekable();

    let mut oracle_sums = vec![0.0; arms];
    let mut cum_gain = 0.0;
    let mut previous = None;
    let mut checkpoints = Vec::with_capacity(rounds.len());

    for t in 1..=horizon {
        let row = table.row_unchecked(t);
        let arm = agent.select_arm(t);
        if arm.0 >= arms {
            return Err(Error::OutOfBounds {
                what: "arm",
                index: arm.0,
                lo: 0,
                hi: arms - 1,
            });
        }
        let gain = adversary.realize(row[arm.0], arm, previous);
        agent.observe(t, arm, gain)?;
        cum_gain += gain;
        previous = Some(arm);
        for (acc, g) in oracle_sums.iter_mut().zip(row) {
            *acc += g;
        }
        if next.peek() == Some(&t) {
            next.next();
            let (_, oracle_gain) = best_of(&oracle_sums);
            checkpoints.push(Checkpoint {
                round: t,
                cum_gain,
                oracle_gain,
                regret: oracle_gain - cum_gain,
            });
        }
    }
    Ok(Trajectory { checkpoints })
}

/// Generates the trial's table from its adversary stream and plays the
/// algorithm on it with the trial's algorithm and noise streams.
pub fn run_trial(
    algorithm: &AlgorithmKind,
    adversary: &AdversaryKind,
    horizon: usize,
    arms: usize,
    base_seed: u64,
    trial_index: u64,
    schedule: &CheckpointSchedule,
) -> Result<Trajectory> {
    let table = trial_table(adversary, horizon, arms, base_seed, trial_index)?;
    run_trial_on_table(algorithm, adversary, &table, base_seed, trial_index, schedule)
}

/// The base table shared by every algorithm in a trial.
pub fn trial_table(
    adversary: &AdversaryKind,
    horizon: usize,
    arms: usize,
    base_seed: u64,
    trial_index: u64,
) -> Result<GainTable> {
    let mut rng = RngStream::new(base_seed, trial_index, StreamRole::Adversary);
    adversary.generate(horizon, arms, &mut rng)
}

pub fn run_trial_on_table(
    algorithm: &AlgorithmKind,
    adversary: &AdversaryKind,
    table: &GainTable,
    base_seed: u64,
    trial_index: u64,
    schedule: &CheckpointSchedule,
) -> Result<Trajectory> {
    let mut agent = algorithm.build(table.horizon(), table.arms(), base_seed, trial_index)?;
    play(&mut agent, adversary, table, schedule)
}
