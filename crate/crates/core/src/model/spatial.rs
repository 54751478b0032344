//! Spatial operators of the lattice Klein–Gordon equation
//! `(∂_t + w*) N^{-2} (∂_t − w) φ + h₀ φ = 0`.

use super::slice::LatticeSlice;
use crate::error::Result;
use crate::linalg::{c, real_diag, CMat};

/// `h₀`, the shift `w`, its adjoint and `h = h₀ − w* N^{-2} w`, with the two
/// diagonal Grams `ρΔy` and `NρΔy`.
#[derive(Debug, Clone)]
pub struct SpatialOperators {
    slice: LatticeSlice,
    h0: CMat,
    w_op: CMat,
    w_star: CMat,
    h: CMat,
    gram_h: Vec<f64>,
    gram_ht: Vec<f64>,
}

/// Assembles the second-order finite-volume `h₀` (Dirichlet walls) and the
/// centered shift derivative. Adjoints are exact for the `NρΔy` Gram.
pub fn assemble_spatial(slice: &LatticeSlice) -> Result<SpatialOperators> {
    let n = slice.len();
    let dy = slice.spacing();
    let lapse = slice.lapse();
    let rho = slice.metric_weight();
    let gram_h: Vec<f64> = rho.iter().map(|r| r * dy).collect();
    let gram_ht: Vec<f64> = lapse.iter().zip(&gram_h).map(|(n, g)| n * g).collect();
    // flux coefficient N ρ h^{yy} = N / ρ at the faces
    let flux: Vec<f64> = slice
        .face_lapse()
        .iter()
        .zip(slice.face_weight())
        .map(|(n, r)| n / r)
        .collect();

    let mut h0 = CMat::zeros(n, n);
    let mut w_op = CMat::zeros(n, n);
    for j in 0..n {
        let denom = lapse[j] * rho[j] * dy * dy;
        h0[(j, j)] = c((flux[j] + flux[j + 1]) / denom + slice.potential()[j]);
        if j > 0 {
            h0[(j, j - 1)] = c(-flux[j] / denom);
            w_op[(j, j - 1)] = c(-slice.shift()[j] / (2.0 * dy));
        }
        if j + 1 < n {
            h0[(j, j + 1)] = c(-flux[j + 1] / denom);
            w_op[(j, j + 1)] = c(slice.shift()[j] / (2.0 * dy));
        }
    }
    let w_star = CMat::from_fn(n, n, |j, k| w_op[(k, j)].conj() * (gram_ht[k] / gram_ht[j]));
    let inv_lapse_sq = real_diag(&lapse.iter().map(|n| 1.0 / (n * n)).collect::<Vec<_>>());
    let h = &h0 - &w_star * inv_lapse_sq * &w_op;
    Ok(SpatialOperators { slice: slice.clone(), h0, w_op, w_star, h, gram_h, gram_ht })
}

impl SpatialOperators {
    pub fn slice(&self) -> &LatticeSlice {
        &self.slice
    }

    pub fn dim(&self) -> usize {
        self.slice.len()
    }

    pub fn h0(&self) -> &CMat {
        &self.h0
    }

    pub fn w_op(&self) -> &CMat {
        &self.w_op
    }

    /// Adjoint of `w` for the `NρΔy` Gram.
    pub fn w_star(&self) -> &CMat {
        &self.w_star
    }

    pub fn h(&self) -> &CMat {
        &self.h
    }

    /// Diagonal of the `L²(S, |h|^{1/2}dy)` Gram.
    pub fn gram_h(&self) -> &[f64] {
        &self.gram_h
    }

    /// Diagonal of the `L²(S, N|h|^{1/2}dy)` Gram.
    pub fn gram_htilde(&self) -> &[f64] {
        &self.gram_ht
    }

    pub fn lapse(&self) -> &[f64] {
        self.slice.lapse()
    }
}
