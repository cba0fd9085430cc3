//! The five gain processes used in the regret experiments.
//!
//! Every adversary pregenerates an action-independent `T × K` base table
//! before the game starts, so all algorithms in a trial face the same game.
//! The only adaptive adversary, the switching-cost one (memory `m = 1`),
//! applies its penalty at realisation time through [`AdversaryKind::realized_gain`].

use std::fmt;
use std::io::{self, Write};

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{ArmIndex, Gain};

/// Default spread of the (fully) oblivious adversaries.
pub const DEFAULT_SPREAD: f64 = 0.05;
/// Default refresh period of the oblivious adversary.
pub const DEFAULT_PERIOD: usize = 200;
/// Default best arm for the synthetic adversaries (the second arm).
pub const DEFAULT_BEST_ARM: ArmIndex = ArmIndex(1);

/// Pregenerated base gains, row-major by round.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTable {
    horizon: usize,
    arms: usize,
    base: Vec<Gain>,
}

impl GainTable {
    /// Builds a table from a flat row-major buffer of `horizon * arms` gains.
    pub fn from_rows(horizon: usize, arms: usize, base: Vec<Gain>) -> Result<Self> {
        if horizon == 0 || arms == 0 {
            return Err(Error::invalid("dimensions", "horizon and arms must be >= 1"));
        }
        if base.len() != horizon * arms {
            return Err(Error::invalid(
                "base",
                format!("expected {} entries, got {}", horizon * arms, base.len()),
            ));
        }
        if let Some(g) = base.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(Error::invalid("base", format!("gain {g} outside [0, 1]")));
        }
        Ok(GainTable {
            horizon,
            arms,
            base,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    /// Gains of every arm at one-based round `t`.
    pub fn row(&self, t: usize) -> Result<&[Gain]> {
        self.check_round(t)?;
        Ok(self.row_unchecked(t))
    }

    pub fn get(&self, t: usize, arm: ArmIndex) -> Result<Gain> {
        let row = self.row(t)?;
        ArmIndex::checked(arm.0, self.arms)?;
        Ok(row[arm.0])
    }

    pub fn entries(&self) -> &[Gain] {
        &self.base
    }

    #[inline]
    pub(crate) fn row_unchecked(&self, t: usize) -> &[Gain] {
        let start = (t - 1) * self.arms;
        &self.base[start..start + self.arms]
    }

    pub(crate) fn check_round(&self, t: usize) -> Result<()> {
        if (1..=self.horizon).contains(&t) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                what: "round",
                index: t,
                lo: 1,
                hi: self.horizon,
            })
        }
    }

    /// Writes the table as CSV with header `round,arm,gain`, one row per
    /// (round, arm) pair. Rounds are one-based, arms zero-based.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "round,arm,gain")?;
        for t in 1..=self.horizon {
            for (i, g) in self.row_unchecked(t).iter().enumerate() {
                writeln!(out, "{t},{i},{g}")?;
            }
        }
        Ok(())
    }
}

/// Arm 0 pays 0.38 every round, arm 1 pays 1 on even rounds, arm 2 pays 1 on
/// multiples of 3, every other arm pays 0.
pub fn gen_deterministic(horizon: usize, arms: usize) -> Result<GainTable> {
    if arms < 4 {
        return Err(Error::invalid("arms", format!("deterministic adversary needs K >= 4, got {arms}")));
    }
    check_horizon(horizon)?;
    let mut base = vec![0.0; horizon * arms];
    for (row, t) in base.chunks_exact_mut(arms).zip(1..) {
        row[0] = 0.38;
        row[1] = if t % 2 == 0 { 1.0 } else { 0.0 };
        row[2] = if t % 3 == 0 { 1.0 } else { 0.0 };
    }
    GainTable::from_rows(horizon, arms, base)
}

/// Arm 0 is Bernoulli(0.55), the rest Bernoulli(0.5), all i.i.d.
pub fn gen_stochastic(horizon: usize, arms: usize, rng: &mut RngStream) -> Result<GainTable> {
    check_horizon(horizon)?;
    check_arms(arms)?;
    let mut base = Vec::with_capacity(horizon * arms);
    for _ in 0..horizon {
        for i in 0..arms {
            let p = if i == 0 { 0.55 } else { 0.5 };
            base.push(bernoulli(p, rng));
        }
    }
    GainTable::from_rows(horizon, arms, base)
}

/// Fresh every round: the best arm draws `p ~ U[0.5, 0.5 + 2·spread]`, every
/// other arm `p ~ U[0.5 - spread, 0.5 + spread]`, then the gain is
/// Bernoulli(p).
pub fn gen_fully_oblivious(
    horizon: usize,
    arms: usize,
    spread: f64,
    best_arm: ArmIndex,
    rng: &mut RngStream,
) -> Result<GainTable> {
    gen_oblivious(horizon, arms, spread, best_arm, 1, rng)
}

/// Like [`gen_fully_oblivious`] but gains are only redrawn on round 1 and on
/// rounds that are multiples of `period`; in between each arm repeats its
/// last gain.
pub fn gen_oblivious(
    horizon: usize,
    arms: usize,
    spread: f64,
    best_arm: ArmIndex,
    period: usize,
    rng: &mut RngStream,
) -> Result<GainTable> {
    check_horizon(horizon)?;
    check_arms(arms)?;
    check_spread(spread)?;
    ArmIndex::checked(best_arm.0, arms)?;
    if period == 0 {
        return Err(Error::invalid("period", "must be >= 1"));
    }
    let mut base = Vec::with_capacity(horizon * arms);
    for t in 1..=horizon {
        if t == 1 || t % period == 0 {
            for i in 0..arms {
                let (lo, hi) = if i == best_arm.0 {
                    (0.5, 0.5 + 2.0 * spread)
                } else {
                    (0.5 - spread, 0.5 + spread)
                };
                let p = lo + (hi - lo) * rng.uniform();
                base.push(bernoulli(p, rng));
            }
        } else {
            let prev = base.len() - arms;
            base.extend_from_within(prev..prev + arms);
        }
    }
    GainTable::from_rows(horizon, arms, base)
}

/// Shared clipped Gaussian random walk `X_t = clip(X_{t-1} + N(0, σ²), 0, 1)`
/// from `X_0 = 0.5`. The best arm receives `clip(X_t + gap, 0, 1)`, every
/// other arm `X_t`. The switching penalty is not stored here.
pub fn gen_switching_cost_base(
    horizon: usize,
    arms: usize,
    walk_std: f64,
    gap: f64,
    best_arm: ArmIndex,
    rng: &mut RngStream,
) -> Result<GainTable> {
    check_horizon(horizon)?;
    check_arms(arms)?;
    ArmIndex::checked(best_arm.0, arms)?;
    // walk_std = 0 is allowed: it freezes the walk.
    if !(walk_std >= 0.0) || !walk_std.is_finite() {
        return Err(Error::invalid("walk_std", format!("{walk_std} is not a finite value >= 0")));
    }
    if !(0.0..=1.0).contains(&gap) {
        return Err(Error::invalid("gap", format!("{gap} is not in [0, 1]")));
    }
    let mut base = Vec::with_capacity(horizon * arms);
    let mut x = 0.5f64;
    for _ in 0..horizon {
        let z: f64 = StandardNormal.sample(rng);
        x = (x + walk_std * z).clamp(0.0, 1.0);
        let top = (x + gap).clamp(0.0, 1.0);
        base.extend((0..arms).map(|i| if i == best_arm.0 { top } else { x }));
    }
    GainTable::from_rows(horizon, arms, base)
}

/// Default random-walk step for a horizon: `T^(-1/2)`.
pub fn default_walk_std(horizon: usize) -> f64 {
    (horizon as f64).powf(-0.5)
}

/// Default best-arm gap for a horizon: `T^(-1/3)`.
pub fn default_gap(horizon: usize) -> f64 {
    (horizon as f64).powf(-1.0 / 3.0)
}

#[inline]
fn bernoulli(p: f64, rng: &mut RngStream) -> Gain {
    if rng.uniform() < p {
        1.0
    } else {
        0.0
    }
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        Err(Error::invalid("horizon", "must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_arms(arms: usize) -> Result<()> {
    if arms == 0 {
        Err(Error::invalid("arms", "must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_spread(spread: f64) -> Result<()> {
    if spread > 0.0 && spread <= 0.25 {
        Ok(())
    } else {
        Err(Error::invalid("spread", format!("{spread} is not in (0, 0.25]")))
    }
}

/// An adversary together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdversaryKind {
    Deterministic,
    Stochastic,
    FullyOblivious {
        spread: f64,
        best_arm: ArmIndex,
    },
    Oblivious {
        spread: f64,
        best_arm: ArmIndex,
        period: usize,
    },
    SwitchingCost {
        walk_std: f64,
        gap: f64,
        best_arm: ArmIndex,
    },
}

impl AdversaryKind {
    pub const NAMES: [&'static str; 5] = [
        "deterministic",
        "stochastic",
        "fully-oblivious",
        "oblivious",
        "switching-cost",
    ];

    /// The adversary called `name` with its default parameters for `horizon`.
    pub fn with_defaults(name: &str, horizon: usize) -> Result<Self> {
        Ok(match name {
            "deterministic" => AdversaryKind::Deterministic,
            "stochastic" => AdversaryKind::Stochastic,
            "fully-oblivious" => AdversaryKind::FullyOblivious {
                spread: DEFAULT_SPREAD,
                best_arm: DEFAULT_BEST_ARM,
            },
            "oblivious" => AdversaryKind::Oblivious {
                spread: DEFAULT_SPREAD,
                best_arm: DEFAULT_BEST_ARM,
                period: DEFAULT_PERIOD,
            },
            "switching-cost" => AdversaryKind::SwitchingCost {
                walk_std: default_walk_std(horizon),
                gap: default_gap(horizon),
                best_arm: DEFAULT_BEST_ARM,
            },
            other => return Err(Error::invalid("adversary", format!("unknown adversary `{other}`"))),
        })
    }

    /// All five adversaries with default parameters.
    pub fn all_with_defaults(horizon: usize) -> Vec<Self> {
        Self::NAMES
            .iter()
            .map(|n| Self::with_defaults(n, horizon).expect("known name"))
            .collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            AdversaryKind::Deterministic => "deterministic",
            AdversaryKind::Stochastic => "stochastic",
            AdversaryKind::FullyOblivious { .. } => "fully-oblivious",
            AdversaryKind::Oblivious { .. } => "oblivious",
            AdversaryKind::SwitchingCost { .. } => "switching-cost",
        }
    }

    /// How many past actions the realised gain depends on.
    pub fn memory(&self) -> usize {
        match self {
            AdversaryKind::SwitchingCost { .. } => 1,
            _ => 0,
        }
    }

    pub fn generate(&self, horizon: usize, arms: usize, rng: &mut RngStream) -> Result<GainTable> {
        match *self {
            AdversaryKind::Deterministic => gen_deterministic(horizon, arms),
            AdversaryKind::Stochastic => gen_stochastic(horizon, arms, rng),
            AdversaryKind::FullyOblivious { spread, best_arm } => {
                gen_fully_oblivious(horizon, arms, spread, best_arm, rng)
            }
            AdversaryKind::Oblivious {
                spread,
                best_arm,
                period,
            } => gen_oblivious(horizon, arms, spread, best_arm, period, rng),
            AdversaryKind::SwitchingCost {
                walk_std,
                gap,
                best_arm,
            } => gen_switching_cost_base(horizon, arms, walk_std, gap, best_arm, rng),
        }
    }

    /// Gain paid at round `t` for playing `current` after `previous`.
    ///
    /// The switching-cost adversary pays 0 whenever `current != previous`;
    /// every other adversary pays the base entry regardless of history.
    pub fn realized_gain(
        &self,
        table: &GainTable,
        t: usize,
        current: ArmIndex,
        previous: Option<ArmIndex>,
    ) -> Result<Gain> {
        let base = table.get(t, current)?;
        Ok(self.realize(base, current, previous))
    }

    #[inline]
    pub(crate) fn realize(&self, base: Gain, current: ArmIndex, previous: Option<ArmIndex>) -> Gain {
        match (self, previous) {
            (AdversaryKind::SwitchingCost { .. }, Some(prev)) if prev != current => 0.0,
            _ => base,
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamRole;

    fn rng(trial: u64) -> RngStream {
        RngStream::new(42, trial, StreamRole::Adversary)
    }

    fn column_mean(table: &GainTable, arm: usize) -> f64 {
        (1..=table.horizon()).map(|t| table.row(t).unwrap()[arm]).sum::<f64>() / table.horizon() as f64
    }

    #[test]
    fn deterministic_rows() {
        let table = gen_deterministic(12, 5).unwrap();
        assert_eq!(table.row(1).unwrap(), &[0.38, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(table.row(2).unwrap(), &[0.38, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(table.row(3).unwrap(), &[0.38, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(table.row(6).unwrap(), &[0.38, 1.0, 1.0, 0.0, 0.0]);
        assert_eq!(table, gen_deterministic(12, 5).unwrap());
        assert!(gen_deterministic(12, 3).is_err());
        assert!(gen_deterministic(0, 4).is_err());
    }

    #[test]
    fn stochastic_means() {
        let table = gen_stochastic(100_000, 4, &mut rng(0)).unwrap();
        assert!(table.entries().iter().all(|&g| g == 0.0 || g == 1.0));
        assert!((column_mean(&table, 0) - 0.55).abs() <= 0.005);
        for arm in 1..4 {
            assert!((column_mean(&table, arm) - 0.5).abs() <= 0.005);
        }
    }

    #[test]
    fn fully_oblivious_means() {
        let best = ArmIndex(1);
        let table = gen_fully_oblivious(100_000, 4, 0.05, best, &mut rng(1)).unwrap();
        assert!((column_mean(&table, 1) - 0.55).abs() <= 0.005);
        for arm in [0, 2, 3] {
            assert!((column_mean(&table, arm) - 0.5).abs() <= 0.005);
        }
        // Vanishing spread collapses everything to Bernoulli(0.5).
        let flat = gen_fully_oblivious(100_000, 4, 1e-12, best, &mut rng(2)).unwrap();
        for arm in 0..4 {
            assert!((column_mean(&flat, arm) - 0.5).abs() <= 0.005);
        }
    }

    #[test]
    fn spread_and_best_arm_validation() {
        for bad in [0.0, -0.1, 0.26, f64::NAN] {
            assert!(gen_fully_oblivious(10, 4, bad, ArmIndex(1), &mut rng(0)).is_err());
        }
        assert!(gen_fully_oblivious(10, 4, 0.25, ArmIndex(1), &mut rng(0)).is_ok());
        assert!(gen_fully_oblivious(10, 4, 0.05, ArmIndex(4), &mut rng(0)).is_err());
        assert!(gen_oblivious(10, 4, 0.05, ArmIndex(1), 0, &mut rng(0)).is_err());
    }

    #[test]
    fn oblivious_holds_between_refreshes() {
        let table = gen_oblivious(1_000, 4, 0.05, ArmIndex(1), 200, &mut rng(3)).unwrap();
        let first = table.row(1).unwrap().to_vec();
        for t in 2..200 {
            assert_eq!(table.row(t).unwrap(), first.as_slice(), "round {t}");
        }
        let r200 = table.row(200).unwrap().to_vec();
        for t in 201..400 {
            assert_eq!(table.row(t).unwrap(), r200.as_slice(), "round {t}");
        }
    }

    #[test]
    fn period_one_is_fully_oblivious() {
        let a = gen_oblivious(5_000, 4, 0.05, ArmIndex(1), 1, &mut rng(4)).unwrap();
        let b = gen_fully_oblivious(5_000, 4, 0.05, ArmIndex(1), &mut rng(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn switching_cost_base() {
        let t = 4_096;
        let table = gen_switching_cost_base(t, 4, default_walk_std(t), default_gap(t), ArmIndex(1), &mut rng(5)).unwrap();
        assert!(table.entries().iter().all(|g| (0.0..=1.0).contains(g)));
        for s in 1..=t {
            let row = table.row(s).unwrap();
            assert!(row[1] >= row[0]);
            assert_eq!(row[0], row[2]);
            assert_eq!(row[0], row[3]);
        }

        let no_gap = gen_switching_cost_base(t, 4, 0.05, 0.0, ArmIndex(1), &mut rng(6)).unwrap();
        for s in 1..=t {
            let row = no_gap.row(s).unwrap();
            assert!(row.iter().all(|&g| g == row[0]));
        }

        let frozen = gen_switching_cost_base(t, 4, 0.0, 0.1, ArmIndex(1), &mut rng(7)).unwrap();
        for s in 1..=t {
            assert_eq!(frozen.row(s).unwrap(), &[0.5, 0.6, 0.5, 0.5]);
        }

        assert!(gen_switching_cost_base(t, 4, -1.0, 0.1, ArmIndex(1), &mut rng(0)).is_err());
        assert!(gen_switching_cost_base(t, 4, 0.1, 1.5, ArmIndex(1), &mut rng(0)).is_err());
    }

    #[test]
    fn realized_gain_rules() {
        let table = gen_deterministic(6, 4).unwrap();
        let switching = AdversaryKind::with_defaults("switching-cost", 6).unwrap();
        let (a0, a1) = (ArmIndex(0), ArmIndex(1));
        assert_eq!(switching.realized_gain(&table, 2, a1, Some(a0)).unwrap(), 0.0);
        assert_eq!(switching.realized_gain(&table, 2, a1, Some(a1)).unwrap(), 1.0);
        assert_eq!(switching.realized_gain(&table, 2, a1, None).unwrap(), 1.0);
        assert!(switching.realized_gain(&table, 0, a1, None).is_err());
        assert!(switching.realized_gain(&table, 7, a1, None).is_err());

        // memory-0 adversaries ignore history, exhaustively over all pairs
        for kind in AdversaryKind::all_with_defaults(6) {
            if kind.memory() != 0 {
                continue;
            }
            for t in 1..=6 {
                for cur in 0..4 {
                    let base = table.get(t, ArmIndex(cur)).unwrap();
                    assert_eq!(kind.realized_gain(&table, t, ArmIndex(cur), None).unwrap(), base);
                    for prev in 0..4 {
                        let g = kind.realized_gain(&table, t, ArmIndex(cur), Some(ArmIndex(prev))).unwrap();
                        assert_eq!(g, base);
                    }
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in AdversaryKind::all_with_defaults(1024) {
            assert_eq!(AdversaryKind::with_defaults(kind.name(), 1024).unwrap(), kind);
        }
        assert!(AdversaryKind::with_defaults("adaptive", 10).is_err());
    }

    #[test]
    fn csv_dump() {
        let table = gen_deterministic(2, 4).unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "round,arm,gain\n1,0,0.38\n1,1,0\n1,2,0\n1,3,0\n2,0,0.38\n2,1,1\n2,2,0\n2,3,0\n"
        );
    }
}
