//! Bandit agents: EXP3, DP-EXP3-Lap and EXP3_τ.

mod batched;
mod dp_lap;
mod exp3;

pub use batched::{inner_gamma, BatchParams, ClosedBlock, Exp3Tau};
pub use dp_lap::{
    dp_exp3_lap_process_gain, process_gain_with_noise, rejection_probability, scale_to_unit, DpExp3Lap,
    DpExp3LapParams, GainDecision,
};
pub use exp3::{
    exp3_probabilities, sample_arm, sample_arm_with_uniform, tuned_gamma, Exp3, Exp3Params, Exp3State,
};

use std::fmt;

use crate::error::Result;
use crate::rng::{RngStream, StreamRole};
use crate::types::{ArmIndex, Gain};

/// A bandit agent playing rounds `t = 1, 2, …`.
///
/// Each round the harness calls [`select_arm`](Agent::select_arm) once and
/// then [`observe`](Agent::observe) with the realised gain of that arm.
pub trait Agent: Send {
    fn select_arm(&mut self, t: usize) -> ArmIndex;
    fn observe(&mut self, t: usize, arm: ArmIndex, gain: Gain) -> Result<()>;
}

impl<A: Agent + ?Sized> Agent for Box<A> {
    fn select_arm(&mut self, t: usize) -> ArmIndex {
        (**self).select_arm(t)
    }

    fn observe(&mut self, t: usize, arm: ArmIndex, gain: Gain) -> Result<()> {
        (**self).observe(t, arm, gain)
    }
}

/// Which agent to run, with its fully resolved parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgorithmKind {
    Exp3 {
        gamma: f64,
    },
    DpExp3Lap {
        gamma: f64,
        epsilon: f64,
        threshold: f64,
    },
    Exp3Tau {
        gamma: f64,
        tau: usize,
    },
}

impl AlgorithmKind {
    pub const NAMES: [&'static str; 3] = ["exp3", "dp-exp3-lap", "exp3-tau"];

    /// EXP3 tuned to the horizon.
    pub fn exp3(horizon: usize, arms: usize) -> Result<Self> {
        Ok(AlgorithmKind::Exp3 {
            gamma: tuned_gamma(horizon, arms)?,
        })
    }

    /// DP-EXP3-Lap with `b = ln T / ε` and horizon-tuned `γ`.
    pub fn dp_exp3_lap(horizon: usize, arms: usize, epsilon: f64) -> Result<Self> {
        let p = DpExp3LapParams::with_default_threshold(epsilon, horizon)?;
        Ok(AlgorithmKind::DpExp3Lap {
            gamma: tuned_gamma(horizon, arms)?,
            epsilon: p.epsilon(),
            threshold: p.threshold(),
        })
    }

    /// EXP3_τ with the inner EXP3 tuned to `ceil(T/τ)` blocks.
    pub fn exp3_tau(horizon: usize, arms: usize, tau: usize) -> Result<Self> {
        BatchParams::new(tau, horizon)?;
        Ok(AlgorithmKind::Exp3Tau {
            gamma: inner_gamma(horizon, tau, arms)?,
            tau,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmKind::Exp3 { .. } => "exp3",
            AlgorithmKind::DpExp3Lap { .. } => "dp-exp3-lap",
            AlgorithmKind::Exp3Tau { .. } => "exp3-tau",
        }
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            AlgorithmKind::Exp3 { gamma }
            | AlgorithmKind::DpExp3Lap { gamma, .. }
            | AlgorithmKind::Exp3Tau { gamma, .. } => gamma,
        }
    }

    /// Instantiates the agent for one trial, drawing from that trial's
    /// algorithm (and, for DP-EXP3-Lap, noise) stream.
    pub fn build(&self, horizon: usize, arms: usize, base_seed: u64, trial_index: u64) -> Result<Box<dyn Agent>> {
        let algo_rng = RngStream::new(base_seed, trial_index, StreamRole::Algorithm);
        Ok(match *self {
            AlgorithmKind::Exp3 { gamma } => Box::new(Exp3::new(Exp3Params::new(gamma, arms)?, algo_rng)),
            AlgorithmKind::DpExp3Lap {
                gamma,
                epsilon,
                threshold,
            } => Box::new(DpExp3Lap::new(
                Exp3Params::new(gamma, arms)?,
                DpExp3LapParams::new(epsilon, threshold)?,
                algo_rng,
                RngStream::new(base_seed, trial_index, StreamRole::Noise),
            )),
            AlgorithmKind::Exp3Tau { gamma, tau } => Box::new(Exp3Tau::new(
                Exp3Params::new(gamma, arms)?,
                BatchParams::new(tau, horizon)?,
                horizon,
                algo_rng,
            )),
        })
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
