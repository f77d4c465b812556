use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{limits::validate_distribution, TransitionMatrix};
use crate::Result;

/// One Markov chain trajectory with its own random stream.
///
/// The stream is ChaCha8 seeded with the global seed and set to stream
/// `2 * chain_id`, so draws depend only on `(chain_id, seed)`.
#[derive(Debug, Clone)]
pub struct ChainState {
    current: usize,
    rng: ChaCha8Rng,
}

impl ChainState {
    /// Starts a chain at `state` without drawing from an initial distribution.
    pub fn at(state: usize, chain_id: u64, seed: u64) -> Self {
        Self { current: state, rng: stream(seed, 2 * chain_id) }
    }

    /// Draws the initial state from `initial` using the chain's own stream.
    pub fn start(initial: &[f64], chain_id: u64, seed: u64) -> Result<Self> {
        validate_distribution(initial, initial.len())?;
        let mut rng = stream(seed, 2 * chain_id);
        let current = sample_index(initial, rng.gen());
        Ok(Self { current, rng })
    }

    pub fn current(&self) -> usize {
        self.current
    }

    /// Moves to the next state by inverse CDF over row `current` of `p`.
    pub fn step(&mut self, p: &TransitionMatrix) -> usize {
        let u: f64 = self.rng.gen();
        self.current = sample_index(p.row(self.current), u);
        self.current
    }
}

/// Independent noise stream paired with chain `chain_id`.
pub(crate) fn chain_noise_stream(chain_id: u64, seed: u64) -> ChaCha8Rng {
    stream(seed, 2 * chain_id + 1)
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// First index whose cumulative weight exceeds `u ∈ [0, 1)`. Rounding slack
/// at the top of the CDF falls on the last positive entry.
pub fn sample_index(weights: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (j, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = j;
            if u < acc {
                return j;
            }
        }
    }
    last_positive
}
