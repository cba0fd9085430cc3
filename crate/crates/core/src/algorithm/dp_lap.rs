//! DP-EXP3-Lap: EXP3 observing Laplace-perturbed gains.
//!
//! Each observed gain gets `Laplace(1/ε)` noise. Noisy values outside the
//! closed window `[-b, b + 1]` are discarded (no update that round); the rest
//! are mapped affinely onto `[0, 1]` with `(g' + b) / (2b + 1)` and fed to
//! EXP3. The exploration rate stays tuned to the full horizon.

use crate::error::{Error, Result};
use crate::laplace::laplace_sample;
use crate::rng::RngStream;
use crate::types::{ArmIndex, Gain};

use super::exp3::{Exp3, Exp3Params};
use super::Agent;

/// Privacy level `ε` and acceptance threshold `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpExp3LapParams {
    epsilon: f64,
    threshold: f64,
}

impl DpExp3LapParams {
    pub fn new(epsilon: f64, threshold: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::invalid("epsilon", format!("{epsilon} is not a finite value > 0")));
        }
        if !(threshold > 0.0) || !threshold.is_finite() {
            return Err(Error::invalid("threshold", format!("{threshold} is not a finite value > 0")));
        }
        Ok(DpExp3LapParams { epsilon, threshold })
    }

    /// Threshold `b = ln T / ε`. For `T = 1` (where `ln T = 0`) the smallest
    /// positive threshold is used instead.
    pub fn with_default_threshold(epsilon: f64, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon", "must be >= 1"));
        }
        let b = (horizon as f64).ln() / epsilon;
        Self::new(epsilon, if b > 0.0 { b } else { f64::MIN_POSITIVE })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn noise_scale(&self) -> f64 {
        1.0 / self.epsilon
    }
}

/// Outcome of perturbing one gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainDecision {
    Accepted(Gain),
    Rejected,
}

/// `(g' + b) / (2b + 1)` for `g' ∈ [-b, b + 1]`.
pub fn scale_to_unit(noisy_gain: f64, b: f64) -> Result<Gain> {
    if !(b > 0.0) {
        return Err(Error::invalid("b", format!("{b} is not > 0")));
    }
    if !(-b..=b + 1.0).contains(&noisy_gain) {
        return Err(Error::ContractViolation(format!(
            "noisy gain {noisy_gain} outside [-{b}, {b} + 1]"
        )));
    }
    Ok(((noisy_gain + b) / (2.0 * b + 1.0)).clamp(0.0, 1.0))
}

/// Adds the given noise value and applies the acceptance window.
pub fn process_gain_with_noise(gain: Gain, params: &DpExp3LapParams, noise: f64) -> GainDecision {
    let noisy = gain + noise;
    let b = params.threshold;
    if (-b..=b + 1.0).contains(&noisy) {
        GainDecision::Accepted(scale_to_unit(noisy, b).expect("inside window"))
    } else {
        GainDecision::Rejected
    }
}

/// Adds fresh `Laplace(1/ε)` noise drawn from `rng` and applies the
/// acceptance window.
pub fn dp_exp3_lap_process_gain(gain: Gain, params: &DpExp3LapParams, rng: &mut RngStream) -> GainDecision {
    let noise = laplace_sample(params.noise_scale(), rng).expect("epsilon validated > 0");
    process_gain_with_noise(gain, params, noise)
}

/// Exact rejection probability for a true gain `g`:
/// `½e^{-ε(b+g)} + ½e^{-ε(b+1-g)}`. Never exceeds the two-sided tail
/// `e^{-εb}`.
pub fn rejection_probability(gain: Gain, params: &DpExp3LapParams) -> f64 {
    let (eps, b) = (params.epsilon, params.threshold);
    0.5 * (-eps * (b + gain)).exp() + 0.5 * (-eps * (b + 1.0 - gain)).exp()
}

/// The DP-EXP3-Lap agent.
#[derive(Debug, Clone)]
pub struct DpExp3Lap {
    inner: Exp3,
    params: DpExp3LapParams,
    noise: RngStream,
    rejected: u64,
}

impl DpExp3Lap {
    pub fn new(exp3: Exp3Params, params: DpExp3LapParams, algorithm_rng: RngStream, noise_rng: RngStream) -> Self {
        DpExp3Lap {
            inner: Exp3::new(exp3, algorithm_rng),
            params,
            noise: noise_rng,
            rejected: 0,
        }
    }

    pub fn params(&self) -> &DpExp3LapParams {
        &self.params
    }

    pub fn exp3(&self) -> &Exp3 {
        &self.inner
    }

    /// Rounds discarded so far because the noisy gain left the window.
    pub fn rejected_rounds(&self) -> u64 {
        self.rejected
    }
}

impl Agent for DpExp3Lap {
    fn select_arm(&mut self, _t: usize) -> ArmIndex {
        self.inner.draw()
    }

    fn observe(&mut self, _t: usize, arm: ArmIndex, gain: Gain) -> Result<()> {
        match dp_exp3_lap_process_gain(gain, &self.params, &mut self.noise) {
            GainDecision::Accepted(scaled) => self.inner.feed(arm, scaled),
            GainDecision::Rejected => {
                self.rejected += 1;
                Ok(())
            }
        }
    }
}
