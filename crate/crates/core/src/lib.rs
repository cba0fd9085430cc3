//! Differentially private adversarial multi-armed bandits.
//!
//! The crate provides three agents, the gain processes they are evaluated
//! against, closed-form privacy and regret calculators, and a reproducible
//! trial harness:
//!
//! - [`algorithm::Exp3`]: exponential weights with uniform exploration.
//! - [`algorithm::DpExp3Lap`]: EXP3 fed Laplace-perturbed gains, with noisy
//!   gains outside `[-b, b + 1]` discarded and the rest rescaled to `[0, 1]`.
//! - [`algorithm::Exp3Tau`]: plays each EXP3 choice for `τ` rounds and feeds
//!   back the block average, which cuts per-gain sensitivity to `1/τ`.
//!
//! ```
//! use privband::algorithm::AlgorithmKind;
//! use privband::adversary::AdversaryKind;
//! use privband::eval::{run_trial, CheckpointSchedule};
//!
//! let horizon = 1 << 10;
//! let exp3 = AlgorithmKind::exp3(horizon, 4)?;
//! let trajectory = run_trial(
//!     &exp3,
//!     &AdversaryKind::Stochastic,
//!     horizon,
//!     4,
//!     42, // base seed
//!     0,  // trial index
//!     &CheckpointSchedule::Geometric,
//! )?;
//! assert_eq!(trajectory.checkpoints.last().unwrap().round, horizon);
//! # Ok::<(), privband::Error>(())
//! ```
//!
//! Arms are zero-based everywhere: arm `0` is the first arm.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod algorithm;
pub mod bounds;
mod error;
pub mod eval;
pub mod laplace;
pub mod rng;
mod types;

pub use error::{Error, Result};
pub use types::{ArmIndex, Gain, PrivacyBudget, ProbVector, PROB_SUM_TOLERANCE};
