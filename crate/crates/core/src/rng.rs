//! Seeded, role-separated random streams.
//!
//! Every random draw in a trial comes from an [`RngStream`] keyed by
//! `(base_seed, trial_index, role)`. The key selects one ChaCha8 stream out of
//! the 2^64 independent streams available for a given seed, so trials can run
//! on any thread in any order and still reproduce bit for bit.

use rand::distr::Open01;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Roles never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamRole {
    /// Pregeneration of the gain table.
    Adversary,
    /// Arm selection by the agent.
    Algorithm,
    /// Privacy noise injected into observed gains.
    Noise,
}

impl StreamRole {
    const COUNT: u64 = 3;

    fn id(self) -> u64 {
        match self {
            StreamRole::Adversary => 0,
            StreamRole::Algorithm => 1,
            StreamRole::Noise => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RngStream {
    base_seed: u64,
    trial_index: u64,
    role: StreamRole,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(base_seed: u64, trial_index: u64, role: StreamRole) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
        rng.set_stream(
            trial_index
                .wrapping_mul(StreamRole::COUNT)
                .wrapping_add(role.id()),
        );
        RngStream {
            base_seed,
            trial_index,
            role,
            rng,
        }
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }

    pub fn trial_index(&self) -> u64 {
        self.trial_index
    }

    pub fn role(&self) -> StreamRole {
        self.role
    }

    /// Uniform draw on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        self.rng.sample(Open01)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
