//! EXP3: exponential weights over importance-weighted gain estimates, mixed
//! with uniform exploration.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{ArmIndex, Gain, ProbVector};

use super::Agent;

/// Exploration rate `γ` and arm count `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp3Params {
    gamma: f64,
    arms: usize,
}

impl Exp3Params {
    pub fn new(gamma: f64, arms: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::invalid("gamma", format!("{gamma} is not in (0, 1]")));
        }
        if arms == 0 {
            return Err(Error::invalid("arms", "must be >= 1"));
        }
        Ok(Exp3Params { gamma, arms })
    }

    /// `γ = min(1, sqrt(K ln K / ((e - 1) T)))`.
    pub fn tuned(horizon: usize, arms: usize) -> Result<Self> {
        Self::new(tuned_gamma(horizon, arms)?, arms)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn arms(&self) -> usize {
        self.arms
    }
}

/// The horizon-tuned exploration rate, capped at 1.
pub fn tuned_gamma(horizon: usize, arms: usize) -> Result<f64> {
    if horizon == 0 {
        return Err(Error::invalid("horizon", "must be >= 1"));
    }
    if arms < 2 {
        return Err(Error::invalid("arms", format!("tuning needs K >= 2, got {arms}")));
    }
    let k = arms as f64;
    Ok((k * k.ln() / ((E - 1.0) * horizon as f64)).sqrt().min(1.0))
}

/// Cumulative importance-weighted gain estimates `G̃`, one per arm.
#[derive(Debug, Clone, PartialEq)]
pub struct Exp3State {
    gain_estimates: Vec<f64>,
}

impl Exp3State {
    pub fn new(arms: usize) -> Self {
        Exp3State {
            gain_estimates: vec![0.0; arms],
        }
    }

    pub fn from_estimates(gain_estimates: Vec<f64>) -> Self {
        Exp3State { gain_estimates }
    }

    pub fn estimates(&self) -> &[f64] {
        &self.gain_estimates
    }

    /// `G̃[arm] += scaled_gain / p_arm`.
    pub fn update(&mut self, arm: ArmIndex, scaled_gain: Gain, p_arm: f64) -> Result<()> {
        if !(p_arm > 0.0) {
            return Err(Error::invalid("p_arm", format!("{p_arm} is not > 0")));
        }
        if !(0.0..=1.0).contains(&scaled_gain) {
            return Err(Error::ContractViolation(format!(
                "EXP3 fed gain {scaled_gain} outside [0, 1]"
            )));
        }
        let arms = self.gain_estimates.len();
        let slot = self.gain_estimates.get_mut(arm.0).ok_or(Error::OutOfBounds {
            what: "arm",
            index: arm.0,
            lo: 0,
            hi: arms.saturating_sub(1),
        })?;
        *slot += scaled_gain / p_arm;
        Ok(())
    }
}

/// `p_i = (1 - γ) softmax((γ/K) G̃)_i + γ/K`, evaluated with the maximum
/// exponent subtracted first.
pub fn exp3_probabilities(state: &Exp3State, params: &Exp3Params) -> ProbVector {
    let k = params.arms as f64;
    let rate = params.gamma / k;
    let est = &state.gain_estimates;
    debug_assert_eq!(est.len(), params.arms);

    let max = est.iter().fold(f64::NEG_INFINITY, |m, &g| m.max(g));
    let mut p: Vec<f64> = est.iter().map(|&g| ((g - max) * rate).exp()).collect();
    let total: f64 = p.iter().sum();
    let floor = params.gamma / k;
    for x in &mut p {
        *x = (1.0 - params.gamma) * (*x / total) + floor;
    }
    ProbVector::from_normalized(p)
}

/// Inverse-CDF draw over arms in index order.
pub fn sample_arm(p: &ProbVector, rng: &mut RngStream) -> ArmIndex {
    sample_arm_with_uniform(p, rng.uniform())
}

/// Returns the first arm whose cumulative probability exceeds `u ∈ [0, 1)`.
/// Rounding slack at the top end goes to the last arm with positive mass.
pub fn sample_arm_with_uniform(p: &ProbVector, u: f64) -> ArmIndex {
    let mut cumulative = 0.0;
    for (i, &pi) in p.as_slice().iter().enumerate() {
        cumulative += pi;
        if u < cumulative {
            return ArmIndex(i);
        }
    }
    let last = p.as_slice().iter().rposition(|&pi| pi > 0.0).unwrap_or(0);
    ArmIndex(last)
}

/// The EXP3 agent.
#[derive(Debug, Clone)]
pub struct Exp3 {
    params: Exp3Params,
    state: Exp3State,
    rng: RngStream,
    last_p: f64,
}

impl Exp3 {
    pub fn new(params: Exp3Params, rng: RngStream) -> Self {
        Exp3 {
            state: Exp3State::new(params.arms),
            params,
            rng,
            last_p: f64::NAN,
        }
    }

    pub fn params(&self) -> &Exp3Params {
        &self.params
    }

    pub fn state(&self) -> &Exp3State {
        &self.state
    }

    pub fn probabilities(&self) -> ProbVector {
        exp3_probabilities(&self.state, &self.params)
    }

    /// Probability with which the most recently selected arm was drawn.
    pub fn last_probability(&self) -> f64 {
        self.last_p
    }

    pub(crate) fn draw(&mut self) -> ArmIndex {
        let p = self.probabilities();
        let arm = sample_arm(&p, &mut self.rng);
        self.last_p = p.get(arm);
        arm
    }

    /// Feeds a gain in `[0, 1]` for the arm returned by the last draw.
    pub(crate) fn feed(&mut self, arm: ArmIndex, scaled_gain: Gain) -> Result<()> {
        self.state.update(arm, scaled_gain, self.last_p)
    }
}

impl Agent for Exp3 {
    fn select_arm(&mut self, _t: usize) -> ArmIndex {
        self.draw()
    }

    fn observe(&mut self, _t: usize, arm: ArmIndex, gain: Gain) -> Result<()> {
        self.feed(arm, gain)
    }
}
