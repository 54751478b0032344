//! Report on the standing hypotheses of the stationary model: uniform
//! timelikeness, relative bounds on the shift and the equivalence of `h̃` and
//! `h̃₀`.

use super::spatial::SpatialOperators;
use crate::error::{Error, Result};
use crate::linalg::{c, generalized_eigenvalues, real_diag, CMat, GramSpace};

/// All quantities are computed on the lapse-reduced operators. The report
/// carries the outer Dirichlet wall as a modeling choice of every run.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub delta: f64,
    /// Min eigenvalue of `(1−δ)h̃₀ − w̃*w̃` relative to the `NρΔy` Gram.
    pub operator_margin: f64,
    /// `min_j [(1−δ)N_j² − ρ_j² w_j²]`.
    pub pointwise_margin: f64,
    /// `‖w̃ h̃₀^{-1/2}‖`.
    pub shift_ratio: f64,
    /// `‖w̃* h̃₀^{-1/2}‖`.
    pub shift_star_ratio: f64,
    /// Constants with `c₁ h̃₀ ≤ h̃ ≤ c₂ h̃₀`.
    pub c1: f64,
    pub c2: f64,
    /// `max |N^{-2} w ∂N|`.
    pub lapse_gradient: f64,
    /// `max |N^{-1} ρ^{-1} ∂(ρ w)|`.
    pub shift_divergence: f64,
    /// `min_j (1 − ρ_j² w_j² / N_j²)`: how far the Killing field stays
    /// timelike on the grid.
    pub timelike_margin: f64,
    pub dirichlet_wall: f64,
}

impl HypothesisReport {
    pub fn passes(&self) -> bool {
        self.operator_margin >= 0.0 && self.pointwise_margin >= 0.0
    }

    /// `HypothesisViolation` unless [`Self::passes`].
    pub fn strict(self) -> Result<Self> {
        if self.operator_margin < 0.0 {
            return Err(Error::HypothesisViolation(format!(
                "(1-δ)h̃₀ - w̃*w̃ has eigenvalue {:.3e}",
                self.operator_margin
            )));
        }
        if self.pointwise_margin < 0.0 {
            return Err(Error::HypothesisViolation(format!(
                "(1-δ)N² - w·h·w reaches {:.3e}",
                self.pointwise_margin
            )));
        }
        Ok(self)
    }
}

/// Derivative of grid samples: centered inside, one-sided at the ends.
fn grid_derivative(v: &[f64], dy: f64) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|j| match (j, n) {
            (_, 1) => 0.0,
            (0, _) => (v[1] - v[0]) / dy,
            (j, n) if j + 1 == n => (v[j] - v[j - 1]) / dy,
            (j, _) => (v[j + 1] - v[j - 1]) / (2.0 * dy),
        })
        .collect()
}

pub fn validate_hypotheses(ops: &SpatialOperators, delta: f64) -> Result<HypothesisReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::HypothesisViolation(format!("δ = {delta} is outside (0, 1)")));
    }
    let slice = ops.slice();
    let lapse = slice.lapse();
    let rho = slice.metric_weight();
    let shift = slice.shift();
    let n = real_diag(lapse);
    let n_inv = real_diag(&lapse.iter().map(|x| 1.0 / x).collect::<Vec<_>>());
    let h0 = &n * ops.h0() * &n;
    let w = &n_inv * ops.w_op() * &n;
    let g = real_diag(ops.gram_htilde());
    let space = GramSpace::from_diagonal(ops.gram_htilde())?;
    // G w̃* = w̃^H G
    let wstar_w = w.adjoint() * &g * &w;
    let g_h0 = &g * &h0;
    let operator_margin = generalized_eigenvalues(&(&g_h0 * c(1.0 - delta) - &wstar_w), &space)?[0];

    let energy = GramSpace::new(g_h0.clone())?;
    let max_of = |form: &CMat| -> Result<f64> {
        Ok(generalized_eigenvalues(form, &energy)?.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    };
    let shift_ratio = max_of(&wstar_w)?;
    let w_star = space.adjoint(&w);
    let shift_star_ratio = max_of(&(w_star.adjoint() * &g * &w_star))?;
    let equivalence = generalized_eigenvalues(&(&g_h0 - &wstar_w), &energy)?;
    let c1 = equivalence[0];
    let c2 = *equivalence.last().unwrap_or(&1.0);

    let mut pointwise_margin = f64::INFINITY;
    let mut timelike_margin = f64::INFINITY;
    for j in 0..lapse.len() {
        let whw = rho[j] * rho[j] * shift[j] * shift[j];
        pointwise_margin = pointwise_margin.min((1.0 - delta) * lapse[j] * lapse[j] - whw);
        timelike_margin = timelike_margin.min(1.0 - whw / (lapse[j] * lapse[j]));
    }
    let dy = slice.spacing();
    let dn = grid_derivative(lapse, dy);
    let rho_w: Vec<f64> = rho.iter().zip(shift).map(|(r, w)| r * w).collect();
    let div = grid_derivative(&rho_w, dy);
    let mut lapse_gradient = 0.0_f64;
    let mut shift_divergence = 0.0_f64;
    for j in 0..lapse.len() {
        lapse_gradient = lapse_gradient.max((shift[j] * dn[j] / (lapse[j] * lapse[j])).abs());
        shift_divergence = shift_divergence.max((div[j] / (lapse[j] * rho[j])).abs());
    }
    Ok(HypothesisReport {
        delta,
        operator_margin,
        pointwise_margin,
        shift_ratio,
        shift_star_ratio,
        c1,
        c2,
        lapse_gradient,
        shift_divergence,
        timelike_margin,
        dirichlet_wall: slice.grid().wall(),
    })
}
