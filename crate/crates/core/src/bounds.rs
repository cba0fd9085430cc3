//! Closed-form privacy-loss and regret bounds.
//!
//! Every calculator takes natural logarithms throughout. Block lengths `τ`
//! are reported both as the real-valued optimum and rounded to the nearest
//! integer `≥ 1`, since the simulator needs whole rounds.

use std::f64::consts::E;
use std::fmt;

use crate::error::{Error, Result};
use crate::types::PrivacyBudget;

/// One named bound together with the inputs it was evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub value: f64,
    pub inputs: Vec<(&'static str, f64)>,
}

impl BoundReport {
    fn new(name: &'static str, value: f64, inputs: &[(&'static str, f64)]) -> Self {
        BoundReport {
            name,
            value,
            inputs: inputs.to_vec(),
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.name, self.value)?;
        for (k, v) in &self.inputs {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// Privacy loss of plain EXP3 over `T` rounds:
/// `min{2T, T ln((K(1-γ)+γ)/γ), 2(1-γ)T + 2 sqrt(2 ln T / T)}`.
///
/// `γ = 0` makes the middle branch infinite; the minimum of the other two
/// branches is returned.
pub fn exp3_privacy_loss(horizon: u64, arms: usize, gamma: f64) -> Result<f64> {
    if horizon == 0 {
        return Err(Error::invalid("horizon", "must be >= 1"));
    }
    if arms < 2 {
        return Err(Error::invalid("arms", "must be >= 2"));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid("gamma", format!("{gamma} is not in [0, 1]")));
    }
    let t = horizon as f64;
    let k = arms as f64;
    let worst = 2.0 * t;
    let mechanism = if gamma > 0.0 {
        t * ((k * (1.0 - gamma) + gamma) / gamma).ln()
    } else {
        f64::INFINITY
    };
    let chernoff = 2.0 * (1.0 - gamma) * t + 2.0 * (2.0 * t.ln() / t).sqrt();
    Ok(worst.min(mechanism).min(chernoff))
}

/// Advanced composition of `k` sequential `eps0`-DP steps:
/// `(sqrt(2k ln(1/δ')) eps0 + k eps0 (e^{eps0} - 1), δ')`.
pub fn advanced_composition(eps0: f64, k: u64, delta_prime: f64) -> Result<PrivacyBudget> {
    if !(eps0 >= 0.0) || !eps0.is_finite() {
        return Err(Error::invalid("eps0", format!("{eps0} is not a finite value >= 0")));
    }
    if k == 0 {
        return Err(Error::invalid("k", "must be >= 1"));
    }
    check_delta("delta_prime", delta_prime)?;
    let k = k as f64;
    let eps = (2.0 * k * (1.0 / delta_prime).ln()).sqrt() * eps0 + k * eps0 * eps0.exp_m1();
    PrivacyBudget::new(eps, delta_prime)
}

/// Privacy of EXP3_τ: `(4T/τ³ + sqrt(8 ln(1/δ') T/τ³), δ')`.
pub fn exp3_tau_privacy(horizon: u64, tau: f64, delta_prime: f64) -> Result<PrivacyBudget> {
    check_horizon(horizon)?;
    let t = horizon as f64;
    if !(1.0..=t).contains(&tau) {
        return Err(Error::invalid("tau", format!("{tau} is not in [1, {t}]")));
    }
    check_delta("delta_prime", delta_prime)?;
    let ratio = t / tau.powi(3);
    let eps = 4.0 * ratio + (8.0 * (1.0 / delta_prime).ln() * ratio).sqrt();
    PrivacyBudget::new(eps, delta_prime)
}

/// The same quantity obtained by composing a per-observation loss of `2/τ`
/// over `ceil(T/τ)` observations with [`advanced_composition`]. Agrees with
/// [`exp3_tau_privacy`] to first order in `1/τ`.
pub fn exp3_tau_privacy_composed(horizon: u64, tau: u64, delta_prime: f64) -> Result<PrivacyBudget> {
    check_horizon(horizon)?;
    if tau == 0 || tau > horizon {
        return Err(Error::invalid("tau", format!("{tau} is not in [1, {horizon}]")));
    }
    advanced_composition(2.0 / tau as f64, horizon.div_ceil(tau), delta_prime)
}

/// Parameters selected for EXP3_τ against the switching-cost adversary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cor2Params {
    /// `(7K ln K)^{-1/3} T^{1/3}`.
    pub tau_real: f64,
    /// `tau_real` rounded to the nearest integer, at least 1.
    pub tau: u64,
    /// `(28K ln K + sqrt(112 K ln K ln T), T^{-2})`.
    pub budget: PrivacyBudget,
    /// `2(7K ln K)^{1/3} T^{2/3} + (7K ln K)^{-1/3} T^{1/3}`.
    pub regret_bound: f64,
}

/// Block length, privacy and regret of EXP3_τ tuned for switching costs.
pub fn cor2_params(horizon: u64, arms: usize) -> Result<Cor2Params> {
    if arms < 2 || (horizon as usize) < arms {
        return Err(Error::invalid("horizon", format!("need T >= K >= 2, got T={horizon}, K={arms}")));
    }
    let t = horizon as f64;
    let k = arms as f64;
    let klnk = k * k.ln();
    let c = 7.0 * klnk;
    let tau_real = c.powf(-1.0 / 3.0) * t.cbrt();
    let delta_prime = t.powi(-2);
    let eps = 28.0 * klnk + (112.0 * klnk * t.ln()).sqrt();
    Ok(Cor2Params {
        tau_real,
        tau: round_tau(tau_real).min(horizon),
        budget: PrivacyBudget::new(eps, delta_prime)?,
        regret_bound: 2.0 * c.cbrt() * t.powf(2.0 / 3.0) + tau_real,
    })
}

/// Block length achieving a target `(ε, δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cor3Tau {
    /// `((4Tε + 2T ln(1/δ)) / ε²)^{1/3}`.
    pub tau_real: f64,
    pub tau: u64,
}

pub fn cor3_tau(horizon: u64, epsilon: f64, delta: f64) -> Result<Cor3Tau> {
    check_horizon(horizon)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon", format!("{epsilon} is not a finite value > 0")));
    }
    check_delta("delta", delta)?;
    let t = horizon as f64;
    let tau_real = ((4.0 * t * epsilon + 2.0 * t * (1.0 / delta).ln()) / (epsilon * epsilon)).cbrt();
    Ok(Cor3Tau {
        tau_real,
        tau: round_tau(tau_real).min(horizon),
    })
}

/// Regret of a Laplace-wrapped agent on top of its scaled-gain bound:
/// `base + 2TK e^{-εb} + sqrt(32T)/ε`.
pub fn theorem1_regret_bound(horizon: u64, arms: usize, epsilon: f64, b: f64, base_scaled_bound: f64) -> Result<f64> {
    check_horizon(horizon)?;
    check_positive("epsilon", epsilon)?;
    check_positive("b", b)?;
    if !(base_scaled_bound >= 0.0) {
        return Err(Error::invalid("base_scaled_bound", format!("{base_scaled_bound} is not >= 0")));
    }
    let t = horizon as f64;
    Ok(base_scaled_bound + 2.0 * t * arms as f64 * (-epsilon * b).exp() + (32.0 * t).sqrt() / epsilon)
}

/// Regret of DP-EXP3-Lap with `b = ln T / ε`:
/// `(4 ln T / ε) sqrt((e-1) T K ln K) + 2K + sqrt(32T)/ε`.
pub fn cor1_regret_bound(horizon: u64, arms: usize, epsilon: f64) -> Result<f64> {
    check_horizon(horizon)?;
    check_positive("epsilon", epsilon)?;
    let t = horizon as f64;
    let k = arms as f64;
    Ok(4.0 * t.ln() / epsilon * ((E - 1.0) * t * k * k.ln()).sqrt() + 2.0 * k + (32.0 * t).sqrt() / epsilon)
}

/// Expected weak regret of EXP3 with tuned `γ`: `2 sqrt((e-1) T K ln K)`.
pub fn exp3_regret_bound(horizon: u64, arms: usize) -> Result<f64> {
    check_horizon(horizon)?;
    let t = horizon as f64;
    let k = arms as f64;
    Ok(2.0 * ((E - 1.0) * t * k * k.ln()).sqrt())
}

/// Regret of EXP3_τ against an `m`-memory adversary:
/// `sqrt(7 T τ K ln K) + T m / τ + τ`, valid for `m < τ`.
pub fn exp3_tau_regret_bound(horizon: u64, tau: f64, arms: usize, memory: u64) -> Result<f64> {
    check_horizon(horizon)?;
    if !(tau >= 1.0) || !tau.is_finite() {
        return Err(Error::invalid("tau", format!("{tau} is not a finite value >= 1")));
    }
    if memory as f64 >= tau {
        return Err(Error::invalid("memory", format!("bound requires m < tau, got m={memory}, tau={tau}")));
    }
    let t = horizon as f64;
    let k = arms as f64;
    Ok((7.0 * t * tau * k * k.ln()).sqrt() + t * memory as f64 / tau + tau)
}

/// Every bound that applies to the given parameters, in a fixed order.
///
/// Always reported: EXP3's privacy loss, the EXP3 regret bound and the
/// switching-cost parameter selection. `epsilon` adds the DP-EXP3-Lap rows;
/// `epsilon` together with `delta` adds the target-driven block length;
/// `tau` adds EXP3_τ's privacy and regret at that block length.
pub fn budget_report(
    horizon: u64,
    arms: usize,
    epsilon: Option<f64>,
    delta: Option<f64>,
    tau: Option<u64>,
) -> Result<Vec<BoundReport>> {
    let t = horizon as f64;
    let k = arms as f64;
    let mut rows = Vec::new();

    let gamma = crate::algorithm::tuned_gamma(horizon as usize, arms)?;
    rows.push(BoundReport::new(
        "exp3.privacy_loss",
        exp3_privacy_loss(horizon, arms, gamma)?,
        &[("T", t), ("K", k), ("gamma", gamma)],
    ));
    rows.push(BoundReport::new(
        "exp3.regret_bound",
        exp3_regret_bound(horizon, arms)?,
        &[("T", t), ("K", k)],
    ));

    let cor2 = cor2_params(horizon, arms)?;
    let cor2_inputs = [("T", t), ("K", k)];
    rows.push(BoundReport::new("cor2.tau_real", cor2.tau_real, &cor2_inputs));
    rows.push(BoundReport::new("cor2.tau", cor2.tau as f64, &cor2_inputs));
    rows.push(BoundReport::new("cor2.epsilon", cor2.budget.epsilon(), &cor2_inputs));
    rows.push(BoundReport::new("cor2.delta_prime", cor2.budget.delta(), &cor2_inputs));
    rows.push(BoundReport::new("cor2.regret_bound", cor2.regret_bound, &cor2_inputs));
    rows.push(BoundReport::new(
        "dp_exp3_lap.regret_bound_at_cor2_epsilon",
        cor1_regret_bound(horizon, arms, cor2.budget.epsilon())?,
        &[("T", t), ("K", k), ("epsilon", cor2.budget.epsilon())],
    ));

    if let Some(eps) = epsilon {
        let b = t.ln() / eps;
        let inputs = [("T", t), ("K", k), ("epsilon", eps), ("b", b)];
        rows.push(BoundReport::new("dp_exp3_lap.epsilon", eps, &inputs));
        rows.push(BoundReport::new("dp_exp3_lap.threshold", b, &inputs));
        rows.push(BoundReport::new(
            "dp_exp3_lap.regret_bound",
            cor1_regret_bound(horizon, arms, eps)?,
            &inputs,
        ));
        if b > 0.0 {
            rows.push(BoundReport::new(
                "dp_exp3_lap.noise_overhead",
                theorem1_regret_bound(horizon, arms, eps, b, 0.0)?,
                &inputs,
            ));
        }
        if let Some(delta) = delta {
            let cor3 = cor3_tau(horizon, eps, delta)?;
            let inputs = [("T", t), ("epsilon", eps), ("delta", delta)];
            rows.push(BoundReport::new("cor3.tau_real", cor3.tau_real, &inputs));
            rows.push(BoundReport::new("cor3.tau", cor3.tau as f64, &inputs));
        }
    }

    if let Some(tau) = tau {
        let delta_prime = delta.unwrap_or(cor2.budget.delta());
        let inputs = [("T", t), ("tau", tau as f64), ("delta_prime", delta_prime)];
        rows.push(BoundReport::new(
            "exp3_tau.privacy_epsilon",
            exp3_tau_privacy(horizon, tau as f64, delta_prime)?.epsilon(),
            &inputs,
        ));
        rows.push(BoundReport::new(
            "exp3_tau.privacy_epsilon_composed",
            exp3_tau_privacy_composed(horizon, tau, delta_prime)?.epsilon(),
            &inputs,
        ));
        if tau >= 2 {
            rows.push(BoundReport::new(
                "exp3_tau.regret_bound_m1",
                exp3_tau_regret_bound(horizon, tau as f64, arms, 1)?,
                &[("T", t), ("tau", tau as f64), ("K", k), ("m", 1.0)],
            ));
        }
        rows.push(BoundReport::new(
            "exp3_tau.regret_bound_m0",
            exp3_tau_regret_bound(horizon, tau as f64, arms, 0)?,
            &[("T", t), ("tau", tau as f64), ("K", k), ("m", 0.0)],
        ));
    }
    Ok(rows)
}

fn round_tau(tau_real: f64) -> u64 {
    (tau_real.round() as u64).max(1)
}

fn check_horizon(horizon: u64) -> Result<()> {
    if horizon == 0 {
        Err(Error::invalid("horizon", "must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{x} is not > 0")))
    }
}

fn check_delta(name: &'static str, delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{delta} is not in (0, 1)")))
    }
}
