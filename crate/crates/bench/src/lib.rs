//! Shared inputs for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trivec::sampling;
use trivec::ThreeQubitState;

/// `n` states from a fixed seed, so runs compare like with like.
pub fn seeded_states(seed: u64, n: usize) -> Vec<ThreeQubitState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sampling::random_state(&mut rng)).collect()
}
