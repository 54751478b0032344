//! One-dimensional lattice slices of a standard stationary metric.

use crate::error::{Error, Result};

/// Uniform grid of slice points; cell faces sit halfway between points, and
/// the Dirichlet wall nodes one spacing beyond either end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceGrid {
    pub first: f64,
    pub spacing: f64,
    pub n: usize,
}

impl SliceGrid {
    /// Points `y_j = jΔy` with walls at `0` and `length`.
    pub fn vertex(length: f64, n: usize) -> Self {
        let spacing = length / (n as f64 + 1.0);
        Self { first: spacing, spacing, n }
    }

    /// Points `y_j = (j − ½)Δy`: the face at `y = 0` is the horizon and the
    /// wall sits at `length`.
    pub fn staggered(length: f64, n: usize) -> Self {
        let spacing = length / (n as f64 + 0.5);
        Self { first: 0.5 * spacing, spacing, n }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.first + j as f64 * self.spacing).collect()
    }

    /// The `n + 1` faces, from below the first point to above the last.
    pub fn faces(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.first + (j as f64 - 0.5) * self.spacing).collect()
    }

    /// Position of the outer Dirichlet node.
    pub fn wall(&self) -> f64 {
        self.first + self.n as f64 * self.spacing
    }

    pub fn is_staggered(&self) -> bool {
        (self.first - 0.5 * self.spacing).abs() <= 1e-12 * self.spacing
    }
}

/// Coefficient functions of `N² dt² − h(dy + w dt)²` plus the potential.
pub trait SliceProfile {
    fn lapse(&self, y: f64) -> f64;
    fn shift(&self, _y: f64) -> f64 {
        0.0
    }
    /// `|h|^{1/2}`.
    fn weight(&self, _y: f64) -> f64 {
        1.0
    }
    fn potential(&self, y: f64) -> f64;
}

/// Static slab: `N = 1`, `w = 0`, constant potential.
#[derive(Debug, Clone, Copy)]
pub struct StaticSlab {
    pub mass_sq: f64,
}

impl SliceProfile for StaticSlab {
    fn lapse(&self, _y: f64) -> f64 {
        1.0
    }
    fn potential(&self, _y: f64) -> f64 {
        self.mass_sq
    }
}

/// Near-horizon toy: `N = y(κ + d y²)`, `w = ε y³`, constant potential.
#[derive(Debug, Clone, Copy)]
pub struct ToyHorizon {
    pub kappa: f64,
    pub lapse_cubic: f64,
    pub epsilon: f64,
    pub mass_sq: f64,
}

impl ToyHorizon {
    pub fn new(kappa: f64, epsilon: f64, mass_sq: f64) -> Self {
        Self { kappa, lapse_cubic: 0.0, epsilon, mass_sq }
    }
}

impl SliceProfile for ToyHorizon {
    fn lapse(&self, y: f64) -> f64 {
        y * (self.kappa + self.lapse_cubic * y * y)
    }
    fn shift(&self, y: f64) -> f64 {
        self.epsilon * y.powi(3)
    }
    fn potential(&self, _y: f64) -> f64 {
        self.mass_sq
    }
}

/// Sampled slice: values at the points and, for the fluxes, lapse and weight
/// at the faces.
#[derive(Debug, Clone)]
pub struct LatticeSlice {
    grid: SliceGrid,
    points: Vec<f64>,
    weight: Vec<f64>,
    lapse: Vec<f64>,
    shift: Vec<f64>,
    potential: Vec<f64>,
    face_lapse: Vec<f64>,
    face_weight: Vec<f64>,
    mass_floor: f64,
}

impl LatticeSlice {
    /// Samples `profile` on `grid`. `mass_floor` is `m₀²`; the potential must
    /// stay at or above it.
    pub fn sample(grid: SliceGrid, profile: &dyn SliceProfile, mass_floor: f64) -> Result<Self> {
        if grid.n == 0 || !(grid.spacing > 0.0) {
            return Err(Error::InvalidSlice("empty grid or non-positive spacing".into()));
        }
        if !(mass_floor > 0.0) {
            return Err(Error::NonPositivePotential { index: 0, value: mass_floor, floor: mass_floor });
        }
        let points = grid.points();
        let faces = grid.faces();
        let slice = Self {
            weight: points.iter().map(|&y| profile.weight(y)).collect(),
            lapse: points.iter().map(|&y| profile.lapse(y)).collect(),
            shift: points.iter().map(|&y| profile.shift(y)).collect(),
            potential: points.iter().map(|&y| profile.potential(y)).collect(),
            face_lapse: faces.iter().map(|&y| profile.lapse(y)).collect(),
            face_weight: faces.iter().map(|&y| profile.weight(y)).collect(),
            points,
            grid,
            mass_floor,
        };
        slice.validate()?;
        Ok(slice)
    }

    fn validate(&self) -> Result<()> {
        for (index, &value) in self.lapse.iter().enumerate() {
            if !(value > 0.0) {
                return Err(Error::DegenerateLapse { index, value });
            }
        }
        for (index, &value) in self.potential.iter().enumerate() {
            if !(value >= self.mass_floor) {
                return Err(Error::NonPositivePotential { index, value, floor: self.mass_floor });
            }
        }
        if self.weight.iter().chain(&self.face_weight).any(|&r| !(r > 0.0)) {
            return Err(Error::InvalidSlice("metric weight must be positive".into()));
        }
        if self.face_lapse.iter().any(|&n| !(n >= 0.0)) {
            return Err(Error::InvalidSlice("face lapse must be non-negative".into()));
        }
        let finite = [&self.shift, &self.face_lapse].iter().all(|v| v.iter().all(|x| x.is_finite()));
        if !finite {
            return Err(Error::InvalidSlice("non-finite coefficient".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn grid(&self) -> SliceGrid {
        self.grid
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn metric_weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn lapse(&self) -> &[f64] {
        &self.lapse
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn face_lapse(&self) -> &[f64] {
        &self.face_lapse
    }

    pub fn face_weight(&self) -> &[f64] {
        &self.face_weight
    }

    pub fn mass_floor(&self) -> f64 {
        self.mass_floor
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staggered_grid_puts_a_face_on_the_horizon() {
        let g = SliceGrid::staggered(1.0, 8);
        assert!(g.faces()[0].abs() < 1e-15);
        assert!((g.wall() - 1.0).abs() < 1e-14);
        assert!(g.is_staggered());
        assert!(!SliceGrid::vertex(1.0, 8).is_staggered());
    }

    #[test]
    fn rejects_bad_coefficients() {
        let g = SliceGrid::vertex(1.0, 4);
        let err = LatticeSlice::sample(g, &StaticSlab { mass_sq: 0.5 }, 1.0).unwrap_err();
        assert!(matches!(err, Error::NonPositivePotential { .. }));
        let bad = ToyHorizon::new(-1.0, 0.0, 1.0);
        let err = LatticeSlice::sample(g, &bad, 1.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateLapse { index: 0, .. }));
    }
}
