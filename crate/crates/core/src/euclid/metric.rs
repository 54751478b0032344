//! Complex symmetric Euclidean metrics and their sectoriality.

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::LatticeSlice;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Coordinates `(s, y)`.
    Cylinder,
    /// Coordinates `(X, Y)`.
    Cartesian,
}

/// Components `(k₁₁, k₁₂, k₂₂)` of a complex symmetric 2×2 metric.
pub type MetricSample = [C64; 3];

/// `sup_v |Im(v̄·k v)| / Re(v̄·k v)`, the ratio of the imaginary to the real
/// part of the quadratic form, from the 2×2 generalized eigenproblem of
/// `(Im k, Re k)`. Fails when `Re k` is not positive definite.
pub fn sectorial_ratio(k: &MetricSample) -> Option<f64> {
    let (a11, a12, a22) = (k[0].re, k[1].re, k[2].re);
    let (b11, b12, b22) = (k[0].im, k[1].im, k[2].im);
    let det_a = a11 * a22 - a12 * a12;
    if !(a11 > 0.0 && det_a > 0.0) {
        return None;
    }
    // det(B − μA) = 0
    let qa = det_a;
    let qb = -(a11 * b22 + a22 * b11 - 2.0 * a12 * b12);
    let qc = b11 * b22 - b12 * b12;
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    let r1 = (-qb + disc) / (2.0 * qa);
    let r2 = (-qb - disc) / (2.0 * qa);
    Some(r1.abs().max(r2.abs()))
}

/// Complex metric and potential sampled at chart points.
#[derive(Debug, Clone)]
pub struct ComplexMetric2D {
    chart: Chart,
    points: Vec<[f64; 2]>,
    metric: Vec<MetricSample>,
    potential: Vec<f64>,
    sectorial_constant: f64,
}

impl ComplexMetric2D {
    pub fn new(chart: Chart, points: Vec<[f64; 2]>, metric: Vec<MetricSample>, potential: Vec<f64>) -> Result<Self> {
        if metric.len() != points.len() || potential.len() != points.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: metric.len() });
        }
        let mut sectorial_constant = 0.0_f64;
        for (index, k) in metric.iter().enumerate() {
            let ratio = sectorial_ratio(k).ok_or(Error::NotSectorial { index })?;
            if !ratio.is_finite() {
                return Err(Error::NotSectorial { index });
            }
            sectorial_constant = sectorial_constant.max(ratio);
        }
        Ok(Self { chart, points, metric, potential, sectorial_constant })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn metric(&self) -> &[MetricSample] {
        &self.metric
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn sectorial_constant(&self) -> f64 {
        self.sectorial_constant
    }

    /// `k₁₁ k₂₂ − k₁₂²` per point.
    pub fn determinants(&self) -> Vec<C64> {
        self.metric.iter().map(|k| k[0] * k[2] - k[1] * k[1]).collect()
    }
}

/// `k = N² ds² + h (dy + i w ds)²` at the slice points (one `s` line; the
/// metric does not depend on `s`).
pub fn wick_rotate(slice: &LatticeSlice) -> Result<ComplexMetric2D> {
    let mut points = Vec::with_capacity(slice.len());
    let mut metric = Vec::with_capacity(slice.len());
    for j in 0..slice.len() {
        let n = slice.lapse()[j];
        let h = slice.metric_weight()[j].powi(2);
        let w = slice.shift()[j];
        points.push([0.0, slice.points()[j]]);
        metric.push([C64::new(n * n - h * w * w, 0.0), C64::new(0.0, h * w), C64::new(h, 0.0)]);
    }
    ComplexMetric2D::new(Chart::Cylinder, points, metric, slice.potential().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SliceGrid, StaticSlab, ToyHorizon};

    #[test]
    fn static_metric_is_real() {
        let slice = LatticeSlice::sample(SliceGrid::vertex(1.0, 5), &StaticSlab { mass_sq: 1.0 }, 1.0).unwrap();
        assert_eq!(wick_rotate(&slice).unwrap().sectorial_constant(), 0.0);
    }

    #[test]
    fn toy_horizon_ratio_and_determinant() {
        let slice = LatticeSlice::sample(SliceGrid::staggered(1.0, 8), &ToyHorizon::new(1.0, 0.5, 1.0), 1.0).unwrap();
        let metric = wick_rotate(&slice).unwrap();
        for (j, k) in metric.metric().iter().enumerate() {
            let y = slice.points()[j];
            let (n, w) = (y, 0.5 * y.powi(3));
            let exact = w / (n * n - w * w).sqrt();
            assert!((sectorial_ratio(k).unwrap() - exact).abs() < 1e-12);
            let det = metric.determinants()[j];
            assert!((det.re - n * n).abs() < 1e-14 && det.im == 0.0);
        }
    }

    #[test]
    fn timelike_failure_is_not_sectorial() {
        let k = [C64::new(-0.1, 0.0), C64::new(0.0, 1.0), C64::new(1.0, 0.0)];
        assert!(sectorial_ratio(&k).is_none());
    }
}
