//! Divergence identity `∇_a T^a = |k|^{-1/2} ∂_a(|k|^{1/2} T^a)` for complex
//! metrics, both sides by centered differences on a periodic chart.

use rand::Rng;

use super::metric::{Chart, ComplexMetric2D, MetricSample};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Complex vector field samples `(T^X, T^Y)`.
pub type FieldSample = [C64; 2];

/// Samples `metric` and `field` on the `n × n` periodic grid of
/// `[0, period)²`, row-major with `x` fastest.
pub fn sample_periodic(
    n: usize,
    period: f64,
    metric: impl Fn(f64, f64) -> MetricSample,
    field: impl Fn(f64, f64) -> FieldSample,
) -> Result<(ComplexMetric2D, Vec<FieldSample>)> {
    let h = period / n as f64;
    let points: Vec<[f64; 2]> = (0..n * n).map(|p| [(p % n) as f64 * h, (p / n) as f64 * h]).collect();
    let samples = points.iter().map(|p| metric(p[0], p[1])).collect();
    let values = points.iter().map(|p| field(p[0], p[1])).collect();
    let potential = vec![1.0; n * n];
    Ok((ComplexMetric2D::new(Chart::Cartesian, points, samples, potential)?, values))
}

fn inverse(k: &MetricSample) -> [[C64; 2]; 2] {
    let det = k[0] * k[2] - k[1] * k[1];
    [[k[2] / det, -k[1] / det], [-k[1] / det, k[0] / det]]
}

fn entry(k: &MetricSample, a: usize, b: usize) -> C64 {
    k[a + b]
}

/// Max-norm difference between the Christoffel contraction
/// `∂_i T^i + ½ k^{il}(∂_i k_{kl} + ∂_k k_{il} − ∂_l k_{ik}) T^k` and the
/// weighted divergence `|k|^{-1/2} ∂_a(|k|^{1/2} T^a)`, with the principal
/// branch of `|k|^{1/2}`.
pub fn divergence_identity_check(metric: &ComplexMetric2D, field: &[FieldSample]) -> Result<f64> {
    let len = metric.points().len();
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len || n < 3 {
        return Err(Error::GridMisaligned(format!("{len} samples do not form a square periodic grid")));
    }
    if field.len() != len {
        return Err(Error::DimensionMismatch { expected: len, found: field.len() });
    }
    let h = metric.points()[1][0] - metric.points()[0][0];
    let at = |i: usize, j: usize| (j % n) * n + (i % n);
    let k = metric.metric();
    // centered derivative along axis `d` of a sampled quantity
    let diff = |f: &dyn Fn(usize) -> C64, i: usize, j: usize, d: usize| -> C64 {
        let (fwd, bwd) = if d == 0 { (at(i + 1, j), at(i + n - 1, j)) } else { (at(i, j + 1), at(i, j + n - 1)) };
        (f(fwd) - f(bwd)) / (2.0 * h)
    };
    let root: Vec<C64> = metric.determinants().iter().map(|d| d.sqrt()).collect();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..n {
            let p = at(i, j);
            let inv = inverse(&k[p]);
            let mut lhs = C64::new(0.0, 0.0);
            for a in 0..2 {
                lhs += diff(&|q| field[q][a], i, j, a);
            }
            for ii in 0..2 {
                for kk in 0..2 {
                    for l in 0..2 {
                        let g = diff(&|q| entry(&k[q], kk, l), i, j, ii) + diff(&|q| entry(&k[q], ii, l), i, j, kk)
                            - diff(&|q| entry(&k[q], ii, kk), i, j, l);
                        lhs += inv[ii][l] * g * field[p][kk] * 0.5;
                    }
                }
            }
            let mut rhs = C64::new(0.0, 0.0);
            for a in 0..2 {
                rhs += diff(&|q| root[q] * field[q][a], i, j, a);
            }
            rhs /= root[p];
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Smooth random complex metric and field on the `2π`-periodic square, from
/// a few low Fourier modes. `Re k` stays uniformly positive.
#[derive(Debug, Clone)]
pub struct RandomSmoothMetric {
    coef: Vec<[f64; 4]>,
}

impl RandomSmoothMetric {
    /// Number of random trigonometric terms per component (5 metric, 4 field).
    const TERMS: usize = 9;

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let coef = (0..Self::TERMS)
            .map(|_| {
                [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(0..3) as f64,
                    rng.random_range(0..3) as f64,
                    rng.random_range(0.0..std::f64::consts::TAU),
                ]
            })
            .collect();
        Self { coef }
    }

    fn wave(&self, t: usize, x: f64, y: f64) -> f64 {
        let [a, p, q, phase] = self.coef[t];
        a * ((p + 1.0) * x + q * y + phase).sin()
    }

    pub fn metric(&self, x: f64, y: f64) -> MetricSample {
        [
            C64::new(1.5 + 0.3 * self.wave(0, x, y), 0.2 * self.wave(3, x, y)),
            C64::new(0.3 * self.wave(1, x, y), 0.2 * self.wave(4, x, y)),
            C64::new(1.5 + 0.3 * self.wave(2, x, y), 0.2 * self.wave(3, y, x)),
        ]
    }

    pub fn field(&self, x: f64, y: f64) -> FieldSample {
        [
            C64::new(self.wave(5, x, y), self.wave(6, x, y)),
            C64::new(self.wave(7, x, y), self.wave(8, x, y)),
        ]
    }

    pub fn sample_grid(&self, n: usize) -> Result<(ComplexMetric2D, Vec<FieldSample>)> {
        sample_periodic(n, std::f64::consts::TAU, |x, y| self.metric(x, y), |x, y| self.field(x, y))
    }
}
