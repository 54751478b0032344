//! Wedge reflection `y ↦ −y` and the doubled state on the full slice
//! `Σ = Σ⁻ ∪ Σ⁺`.
//!
//! Data on `Σ⁻` are stored in geometric order `−y_n, …, −y_1`, so the
//! pullback `r*` reverses indices.

use crate::error::{Error, Result};
use crate::linalg::{c, direct_sum, CMat};
use crate::model::{LatticeSlice, SliceProfile};

use super::covariance::CovariancePair;

/// Relative tolerance of the parity checks on the mirrored slice.
const PARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WedgeReflection {
    n: usize,
}

impl WedgeReflection {
    /// Checks `r*N = −N`, `r*w = w`, `r*ρ = ρ` and an even potential by
    /// sampling `profile` at the mirrored points.
    pub fn for_profile(slice: &LatticeSlice, profile: &dyn SliceProfile) -> Result<Self> {
        let fields: [(&str, &dyn Fn(f64) -> f64, f64); 4] = [
            ("lapse", &|y| profile.lapse(y), -1.0),
            ("shift", &|y| profile.shift(y), -1.0),
            ("weight", &|y| profile.weight(y), 1.0),
            ("potential", &|y| profile.potential(y), 1.0),
        ];
        for (name, f, parity) in fields {
            let scale = slice.points().iter().fold(f64::MIN_POSITIVE, |m, &y| m.max(f(y).abs()));
            for &y in slice.points() {
                let defect = (f(-y) - parity * f(y)).abs();
                if !(defect <= PARITY_TOL * scale) {
                    return Err(Error::ReflectionInconsistent(format!(
                        "{name} at y = {y}: mirrored value off by {defect:.3e}"
                    )));
                }
            }
        }
        Ok(Self { n: slice.len() })
    }

    /// Reflection for `n` points without profile checks.
    pub fn unchecked(n: usize) -> Self {
        Self { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `r*` on point values.
    pub fn pullback_points(&self) -> CMat {
        CMat::from_fn(self.n, self.n, |i, j| if i + j + 1 == self.n { c(1.0) } else { c(0.0) })
    }

    /// `R_Σ = T r*`: Cauchy data on `Σ⁻` to data on `Σ⁺`.
    pub fn pullback(&self) -> CMat {
        let r = self.pullback_points();
        direct_sum(&r, &(-&r))
    }
}

/// `λ_D^± = (1 ⊕ T r*)^H λ_d^± (1 ⊕ T r*)` on `Σ⁺ ⊕ Σ⁻`. The charge becomes
/// `q ⊕ q`, the sign of the second copy being absorbed by the reflection.
pub fn wedge_double(pair: &CovariancePair, refl: &WedgeReflection) -> Result<CovariancePair> {
    let n = refl.len();
    if pair.dim() != 4 * n {
        return Err(Error::DimensionMismatch { expected: 4 * n, found: pair.dim() });
    }
    let m = direct_sum(&CMat::identity(2 * n, 2 * n), &refl.pullback());
    Ok(pair.congruence(&m))
}

/// Reorders a `Σ⁺ ⊕ Σ⁻` pair to full-slice data `(f₀, f₁)`, each component
/// over all points in ascending order.
pub fn to_full_slice(pair: &CovariancePair) -> Result<CovariancePair> {
    if pair.dim() % 4 != 0 {
        return Err(Error::DimensionMismatch { expected: 4 * (pair.dim() / 4 + 1), found: pair.dim() });
    }
    Ok(pair.congruence(&full_slice_permutation(pair.dim() / 4)))
}

/// Matrix `P` with `P[layout, full] = 1`, layout `(f₀⁺, f₁⁺, f₀⁻, f₁⁻)`.
pub fn full_slice_permutation(n: usize) -> CMat {
    let mut p = CMat::zeros(4 * n, 4 * n);
    for i in 0..4 * n {
        let old = match i / n {
            0 => 2 * n + i,
            1 => i - n,
            2 => 3 * n + (i - 2 * n),
            _ => n + (i - 3 * n),
        };
        p[(old, i)] = c(1.0);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm;
    use crate::model::{SliceGrid, ToyHorizon};

    #[test]
    fn reflection_is_an_involution() {
        let r = WedgeReflection::unchecked(5);
        let rr = r.pullback_points() * r.pullback_points();
        assert!(op_norm(&(rr - CMat::identity(5, 5))) == 0.0);
    }

    #[test]
    fn toy_horizon_passes_and_even_lapse_fails() {
        let grid = SliceGrid::staggered(1.0, 6);
        let toy = ToyHorizon::new(1.0, 0.3, 1.0);
        let slice = LatticeSlice::sample(grid, &toy, 1.0).unwrap();
        assert!(WedgeReflection::for_profile(&slice, &toy).is_ok());

        struct Even;
        impl SliceProfile for Even {
            fn lapse(&self, y: f64) -> f64 {
                y + y * y
            }
            fn potential(&self, _y: f64) -> f64 {
                1.0
            }
        }
        let slice = LatticeSlice::sample(grid, &Even, 1.0).unwrap();
        assert!(matches!(
            WedgeReflection::for_profile(&slice, &Even),
            Err(Error::ReflectionInconsistent(_))
        ));
    }

    #[test]
    fn full_slice_permutation_is_orthogonal() {
        let p = full_slice_permutation(3);
        assert!(op_norm(&(p.transpose() * &p - CMat::identity(12, 12))) == 0.0);
        // Σ⁻ f₀ comes first in full order
        assert_eq!(p[(6, 0)], c(1.0));
        assert_eq!(p[(0, 3)], c(1.0));
    }
}
