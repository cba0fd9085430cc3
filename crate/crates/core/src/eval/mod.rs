//! The regret harness: trials against the fixed oracle and robust
//! aggregation across trials.

mod experiment;
mod stats;
mod trial;

pub use experiment::{
    run_experiment, run_experiment_with_threads, summarize, CellResult, ExperimentConfig, ExperimentResult,
};
pub use stats::{gmd, gmd_split, median, median_of_means, Gmd, SummaryStat};
pub use trial::{
    fixed_oracle_cumgain, play, run_trial, run_trial_on_table, trial_table, Checkpoint, CheckpointSchedule,
    Trajectory,
};
