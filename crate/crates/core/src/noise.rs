//! Counter-based random numbers.
//!
//! Every draw is addressed by `(seed, domain, stream, index)`. The seed and
//! domain form a ChaCha8 key, the stream selects one of ChaCha's 2^64
//! streams and the index jumps the block counter, so a particle's numbers
//! never depend on which thread handles it or in which order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor3::Vector3;

/// 32-bit words reserved per index: four ChaCha blocks, i.e. 32 `u64`
/// draws. Three normals need more than that only after dozens of
/// consecutive ziggurat rejections.
const WORDS_PER_INDEX: u128 = 64;

const DOMAIN_STEP: u64 = 0x7374_6570; // "step"
const DOMAIN_INITIAL: u64 = 0x696e_6974; // "init"

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoiseStream {
    seed: u64,
}

impl NoiseStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn rng(&self, domain: u64, stream: u64, index: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&domain.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream);
        rng.set_word_pos(u128::from(index) * WORDS_PER_INDEX);
        rng
    }

    /// Three independent N(0, 1) variates for `particle` at `step`.
    pub fn normal_triple(&self, step: u64, particle: u64) -> Vector3 {
        let mut rng = self.rng(DOMAIN_STEP, step, particle);
        Vector3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }

    /// Three independent U[0, 1) variates used to draw the initial state of
    /// `particle`.
    pub fn initial_uniforms(&self, particle: u64) -> [f64; 3] {
        let mut rng = self.rng(DOMAIN_INITIAL, 0, particle);
        [rng.random(), rng.random(), rng.random()]
    }

    /// Three N(0, 1) variates for the initial state of `particle`.
    pub fn initial_normals(&self, particle: u64) -> Vector3 {
        let mut rng = self.rng(DOMAIN_INITIAL, 1, particle);
        Vector3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }
}

pub fn standard_normal_triple(stream: &NoiseStream, step: u64, particle: u64) -> Vector3 {
    stream.normal_triple(step, particle)
}
