//! Fixtures shared by the benchmarks.

use hhi_forge_core::model::{LatticeSlice, SliceGrid, ToyHorizon};
use hhi_forge_core::random::random_system;
use hhi_forge_core::FirstOrderSystem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Toy horizon `N = y`, `w = ε y³` on a staggered grid of `[0, 1]`.
pub fn toy_slice(n: usize, epsilon: f64) -> LatticeSlice {
    LatticeSlice::sample(SliceGrid::staggered(1.0, n), &ToyHorizon::new(1.0, epsilon, 1.0), 1.0)
        .expect("toy slice is valid")
}

/// Seeded random system with `n` slice points.
pub fn system(n: usize) -> FirstOrderSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    random_system(&mut rng, n, true).expect("random system is valid")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
