//! Seeded random slices and systems for property tests and benchmarks.

use rand::Rng;

use crate::error::Result;
use crate::model::{assemble_spatial, lapse_reduce, FirstOrderSystem, LatticeSlice, SliceGrid, SliceProfile};

/// Smooth profile on `(0, L)` with a few random Fourier coefficients. The
/// shift is kept below half of the lapse, so the model stays uniformly
/// timelike.
#[derive(Debug, Clone)]
pub struct RandomProfile {
    pub length: f64,
    pub lapse: [f64; 3],
    pub shift: [f64; 3],
    pub weight: [f64; 2],
    pub mass_sq: f64,
    pub bump: f64,
}

impl RandomProfile {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, length: f64, with_shift: bool) -> Self {
        let mut coef = |a: f64| rng.random_range(-a..a);
        let lapse = [coef(0.25), coef(0.25), coef(0.2)];
        let shift = if with_shift { [coef(0.15), coef(0.15), coef(0.1)] } else { [0.0; 3] };
        let weight = [coef(0.2), coef(0.2)];
        Self { length, lapse, shift, weight, mass_sq: 1.0, bump: coef(0.5).abs() }
    }

    fn wave(&self, a: &[f64], y: f64) -> f64 {
        let t = std::f64::consts::PI * y / self.length;
        a.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * t).sin()).sum()
    }
}

impl SliceProfile for RandomProfile {
    fn lapse(&self, y: f64) -> f64 {
        1.0 + self.wave(&self.lapse, y)
    }
    fn shift(&self, y: f64) -> f64 {
        self.wave(&self.shift, y)
    }
    fn weight(&self, y: f64) -> f64 {
        1.0 + self.wave(&self.weight, y)
    }
    fn potential(&self, y: f64) -> f64 {
        let t = y / self.length - 0.5;
        self.mass_sq + self.bump * (-20.0 * t * t).exp()
    }
}

/// A random first-order system on `n` slice points (Cauchy data of
/// dimension `2n`).
pub fn random_system<R: Rng + ?Sized>(rng: &mut R, n: usize, with_shift: bool) -> Result<FirstOrderSystem> {
    let length = rng.random_range(0.5..2.0);
    let profile = RandomProfile::sample(rng, length, with_shift);
    let slice = LatticeSlice::sample(SliceGrid::vertex(length, n), &profile, 1.0)?;
    lapse_reduce(&assemble_spatial(&slice)?)
}
