//! EXP3_τ: plays each EXP3 choice for a block of `τ` rounds and feeds back
//! the block's average gain.
//!
//! Blocks are `[(j-1)τ + 1, jτ]`. When `τ` does not divide the horizon the
//! last block is shorter and its average is over the rounds actually played.
//! The inner EXP3 only ever sees `ceil(T/τ)` observations and is tuned to
//! that horizon.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{ArmIndex, Gain};

use super::exp3::{tuned_gamma, Exp3, Exp3Params};
use super::Agent;

/// Block length `τ` and, for the regret calculator, adversary memory `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchParams {
    tau: usize,
    memory: usize,
}

impl BatchParams {
    pub fn new(tau: usize, horizon: usize) -> Result<Self> {
        if tau == 0 || tau > horizon {
            return Err(Error::invalid("tau", format!("{tau} is not in [1, {horizon}]")));
        }
        Ok(BatchParams { tau, memory: 0 })
    }

    pub fn with_memory(mut self, memory: usize) -> Self {
        self.memory = memory;
        self
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn blocks(&self, horizon: usize) -> usize {
        horizon.div_ceil(self.tau)
    }
}

/// Exploration rate of the inner EXP3: tuned to `ceil(T/τ)` rounds.
pub fn inner_gamma(horizon: usize, tau: usize, arms: usize) -> Result<f64> {
    tuned_gamma(horizon.div_ceil(tau.max(1)), arms)
}

/// A block that has been closed and fed to the inner EXP3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedBlock {
    pub first_round: usize,
    pub last_round: usize,
    pub arm: ArmIndex,
    pub fed_gain: Gain,
}

/// The EXP3_τ agent.
#[derive(Debug, Clone)]
pub struct Exp3Tau {
    inner: Exp3,
    batch: BatchParams,
    horizon: usize,
    current: Option<ArmIndex>,
    block_start: usize,
    block_sum: f64,
    block_len: usize,
    last_closed: Option<ClosedBlock>,
}

impl Exp3Tau {
    /// Inner EXP3 with an explicit exploration setting.
    pub fn new(inner: Exp3Params, batch: BatchParams, horizon: usize, rng: RngStream) -> Self {
        Exp3Tau {
            inner: Exp3::new(inner, rng),
            batch,
            horizon,
            current: None,
            block_start: 1,
            block_sum: 0.0,
            block_len: 0,
            last_closed: None,
        }
    }

    /// Inner EXP3 tuned to the number of blocks.
    pub fn tuned(batch: BatchParams, horizon: usize, arms: usize, rng: RngStream) -> Result<Self> {
        let inner = Exp3Params::new(inner_gamma(horizon, batch.tau, arms)?, arms)?;
        Ok(Self::new(inner, batch, horizon, rng))
    }

    pub fn batch(&self) -> &BatchParams {
        &self.batch
    }

    pub fn exp3(&self) -> &Exp3 {
        &self.inner
    }

    /// The most recently completed block, if any.
    pub fn last_closed_block(&self) -> Option<ClosedBlock> {
        self.last_closed
    }

    fn opens_block(&self, t: usize) -> bool {
        (t - 1) % self.batch.tau == 0
    }

    fn closes_block(&self, t: usize) -> bool {
        t % self.batch.tau == 0 || t == self.horizon
    }
}

impl Agent for Exp3Tau {
    fn select_arm(&mut self, t: usize) -> ArmIndex {
        match self.current {
            Some(arm) if !self.opens_block(t) => arm,
            _ => {
                let arm = self.inner.draw();
                self.current = Some(arm);
                self.block_start = t;
                arm
            }
        }
    }

    fn observe(&mut self, t: usize, arm: ArmIndex, gain: Gain) -> Result<()> {
        if Some(arm) != self.current {
            return Err(Error::ContractViolation(format!(
                "EXP3_tau observed arm {arm} but committed to {:?}",
                self.current
            )));
        }
        self.block_sum += gain;
        self.block_len += 1;
        if self.closes_block(t) {
            let fed_gain = (self.block_sum / self.block_len as f64).clamp(0.0, 1.0);
            self.inner.feed(arm, fed_gain)?;
            self.last_closed = Some(ClosedBlock {
                first_round: self.block_start,
                last_round: t,
                arm,
                fed_gain,
            });
            self.block_sum = 0.0;
            self.block_len = 0;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamRole;

    fn stream() -> RngStream {
        RngStream::new(9, 3, StreamRole::Algorithm)
    }

    #[test]
    fn batch_validation() {
        assert!(BatchParams::new(0, 10).is_err());
        assert!(BatchParams::new(11, 10).is_err());
        assert_eq!(BatchParams::new(3, 10).unwrap().blocks(10), 4);
        assert_eq!(BatchParams::new(1, 10).unwrap().with_memory(1).memory(), 1);
    }

    #[test]
    fn blocks_with_short_tail() {
        let batch = BatchParams::new(3, 10).unwrap();
        let mut agent = Exp3Tau::tuned(batch, 10, 4, stream()).unwrap();
        let mut closed = Vec::new();
        let mut arms = Vec::new();
        for t in 1..=10 {
            let arm = agent.select_arm(t);
            arms.push(arm);
            agent.observe(t, arm, if t % 2 == 1 { 1.0 } else { 0.0 }).unwrap();
            if let Some(b) = agent.last_closed_block() {
                if b.last_round == t {
                    closed.push(b);
                }
            }
        }
        let spans: Vec<_> = closed.iter().map(|b| (b.first_round, b.last_round)).collect();
        assert_eq!(spans, vec![(1, 3), (4, 6), (7, 9), (10, 10)]);
        // gains alternate 1,0,1,0,...: blocks (1,0,1), (0,1,0), (1,0,1), (0)
        let fed: Vec<_> = closed.iter().map(|b| b.fed_gain).collect();
        assert_eq!(fed, vec![2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 0.0]);
        for block in 0..3 {
            assert!(arms[block * 3..block * 3 + 3].iter().all(|&a| a == arms[block * 3]));
        }
    }

    #[test]
    fn tau_one_matches_exp3() {
        let horizon = 2_000;
        let params = Exp3Params::tuned(horizon, 4).unwrap();
        let mut plain = Exp3::new(params, stream());
        let mut batched = Exp3Tau::tuned(BatchParams::new(1, horizon).unwrap(), horizon, 4, stream()).unwrap();
        assert_eq!(batched.exp3().params(), &params);
        for t in 1..=horizon {
            let a = plain.select_arm(t);
            let b = batched.select_arm(t);
            assert_eq!(a, b, "round {t}");
            let g = ((t * 7919) % 13) as f64 / 12.0;
            plain.observe(t, a, g).unwrap();
            batched.observe(t, b, g).unwrap();
        }
        assert_eq!(plain.state(), batched.exp3().state());
    }

    #[test]
    fn wrong_arm_is_a_contract_violation() {
        let mut agent = Exp3Tau::tuned(BatchParams::new(2, 4).unwrap(), 4, 4, stream()).unwrap();
        let arm = agent.select_arm(1);
        let other = ArmIndex((arm.0 + 1) % 4);
        assert!(matches!(agent.observe(1, other, 0.5), Err(Error::ContractViolation(_))));
    }
}
