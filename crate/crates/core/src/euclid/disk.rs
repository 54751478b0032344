//! Smooth extension of the Euclidean cylinder at the Hawking temperature to a
//! disk `X² + Y² < L²`, and the HHI covariances from the Calderón projectors
//! of the half disk `{Y > 0}`.
//!
//! With `X = u cos κs`, `Y = u sin κs` and slice coefficients of the parity
//! form `N = u(κ + d u²)`, `w = b u³`, `ρ = 1`, `m = n₀ + n₁u²`, the metric
//! `k = I + dd ξξ^T + i(b/κ)(ζξ^T + ξζ^T)` with `ξ = (−Y, X)`, `ζ = (X, Y)`,
//! `dd = (2κd + (d² − b²)u²)/κ²` is smooth at the origin and
//! `|k|^{1/2} = (κ + d u²)/κ`.
//!
//! Nodes are `X = (i − ½)h`, `Y = kh`, so the line `Y = 0` carries the slice
//! points of both wedges. Nodes on or outside the circle are Dirichlet.

use rayon::prelude::*;

use super::metric::{Chart, ComplexMetric2D, MetricSample};
use crate::calderon::Frame;
use crate::error::{Error, Result};
use crate::linalg::{c, block2, inverse, real_diag, BandLu, BandMatrix, CMat, CVec, Triplets, C64, I};
use crate::model::{assemble_spatial, lapse_reduce, LatticeSlice};
use crate::states::{double_kms_covariances, to_full_slice, wedge_double, CovariancePair, WedgeReflection};

/// Relative residual allowed in the even/odd coefficient fits.
pub const PARITY_TOL: f64 = 1e-8;
/// Relative tolerance on `β = 2π/κ`.
pub const TEMPERATURE_TOL: f64 = 1e-8;
/// Metric agreement required on the overlap annulus.
pub const OVERLAP_TOL: f64 = 1e-10;

/// Fitted coefficients of the parity form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityFit {
    pub kappa: f64,
    pub lapse_cubic: f64,
    pub shift: f64,
    pub mass: [f64; 2],
}

impl ParityFit {
    fn dd(&self, u2: f64) -> f64 {
        let (k, d, b) = (self.kappa, self.lapse_cubic, self.shift);
        (2.0 * k * d + (d * d - b * b) * u2) / (k * k)
    }

    /// `k_ab(X, Y)` as `(k_XX, k_XY, k_YY)`.
    pub fn metric(&self, x: f64, y: f64) -> MetricSample {
        let dd = self.dd(x * x + y * y);
        let bk = self.shift / self.kappa;
        [
            C64::new(1.0 + dd * y * y, -2.0 * bk * x * y),
            C64::new(-dd * x * y, bk * (x * x - y * y)),
            C64::new(1.0 + dd * x * x, 2.0 * bk * x * y),
        ]
    }

    /// `|k|^{1/2}`.
    pub fn volume(&self, x: f64, y: f64) -> f64 {
        (self.kappa + self.lapse_cubic * (x * x + y * y)) / self.kappa
    }

    /// `|k|^{1/2} k^{ab}`, the coefficient of the form.
    pub fn flux(&self, x: f64, y: f64) -> MetricSample {
        let k = self.metric(x, y);
        let v = self.volume(x, y);
        [k[2] / v, -k[1] / v, k[0] / v]
    }

    pub fn potential(&self, x: f64, y: f64) -> f64 {
        self.mass[0] + self.mass[1] * (x * x + y * y)
    }

    /// `2π/κ`.
    pub fn hawking_beta(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.kappa
    }
}

/// Least-squares fit of `values` by polynomials in `t` up to `degree`;
/// returns the coefficients and the max residual relative to the largest
/// value.
fn fit_poly(t: &[f64], values: &[f64], degree: usize) -> (Vec<f64>, f64) {
    let m = nalgebra::DMatrix::from_fn(t.len(), degree + 1, |i, p| t[i].powi(p as i32));
    let rhs = nalgebra::DVector::from_column_slice(values);
    let coef = m.clone().svd(true, true).solve(&rhs, 1e-14).unwrap_or_else(|_| nalgebra::DVector::zeros(degree + 1));
    let scale = values.iter().fold(f64::MIN_POSITIVE, |a, v| a.max(v.abs()));
    let residual = (&m * &coef - rhs).amax() / scale;
    (coef.iter().copied().collect(), residual)
}

/// Fits `N/y = κ + d y²`, `w/y³ = b`, `ρ = 1` and `m = n₀ + n₁y²`.
pub fn fit_parity(slice: &LatticeSlice) -> Result<ParityFit> {
    let y = slice.points();
    let y2: Vec<f64> = y.iter().map(|v| v * v).collect();
    let check = |what: &str, residual: f64| {
        if residual <= PARITY_TOL {
            Ok(())
        } else {
            Err(Error::ParityViolation { what: what.into(), residual, tolerance: PARITY_TOL })
        }
    };
    let a: Vec<f64> = slice.lapse().iter().zip(y).map(|(n, y)| n / y).collect();
    let (lapse, r) = fit_poly(&y2, &a, 1);
    check("lapse/y is not even in y", r)?;
    let shift_scale = slice.shift().iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    let shift = if shift_scale == 0.0 {
        0.0
    } else {
        let b: Vec<f64> = slice.shift().iter().zip(y).map(|(w, y)| w / y.powi(3)).collect();
        let (coef, r) = fit_poly(&y2, &b, 0);
        check("shift/y³ is not constant", r)?;
        coef[0]
    };
    let rho = slice.metric_weight().iter().chain(slice.face_weight());
    let r = rho.fold(0.0_f64, |m, v| m.max((v - 1.0).abs()));
    check("metric weight is not 1 (Gaussian coordinates)", r)?;
    let (mass, r) = fit_poly(&y2, slice.potential(), 1);
    check("potential is not even in y", r)?;
    Ok(ParityFit { kappa: lapse[0], lapse_cubic: lapse[1], shift, mass: [mass[0], mass[1]] })
}

#[derive(Debug, Clone)]
pub struct DiskProblem {
    slice: LatticeSlice,
    fit: ParityFit,
    beta: f64,
    n: usize,
    h: f64,
    radius: f64,
    /// `(i, k)` of each unknown, `X = (i − ½)h`, `Y = kh`.
    nodes: Vec<(isize, isize)>,
    lookup: Vec<Option<usize>>,
    metric: ComplexMetric2D,
    band: BandMatrix,
    lu: BandLu,
    ghost: [Ghost; 2],
    source: CMat,
}

/// Continuation maps across `Y = 0` for one side `d = ±1`:
/// `u₀ = F₀u_d + F₁u_{2d}` and `u_{−d} = S₀u₀ + S₁u_d`.
#[derive(Debug, Clone)]
struct Ghost {
    first: (CMat, CMat),
    second: (CMat, CMat),
}

/// Fits the parity form, checks `β = 2π/κ`, and assembles `K_ext` on the
/// disk of radius equal to the slice wall.
pub fn extend_to_disk(slice: &LatticeSlice, beta: f64) -> Result<DiskProblem> {
    let grid = slice.grid();
    if !grid.is_staggered() {
        return Err(Error::GridMisaligned("the disk needs a staggered slice grid with a face at y = 0".into()));
    }
    if grid.n < 4 {
        return Err(Error::GridMisaligned(format!("{} slice points are too few for the disk", grid.n)));
    }
    let fit = fit_parity(slice)?;
    let hawking = fit.hawking_beta();
    if !((beta - hawking).abs() <= TEMPERATURE_TOL * hawking) {
        return Err(Error::WrongTemperature { beta, hawking });
    }
    let n = grid.n;
    let h = grid.spacing;
    let radius = grid.wall();
    let (cols, rows) = (2 * n as isize + 2, 2 * n as isize + 3);
    let mut lookup = vec![None; (cols * rows) as usize];
    let mut nodes = Vec::new();
    let limit = radius * radius * (1.0 - 1e-12);
    for k in -(n as isize) - 1..=n as isize + 1 {
        for i in -(n as isize)..=n as isize + 1 {
            let (x, y) = ((i as f64 - 0.5) * h, k as f64 * h);
            if x * x + y * y < limit {
                lookup[slot(n, i, k)] = Some(nodes.len());
                nodes.push((i, k));
            }
        }
    }

    let idx = |i: isize, k: isize| -> Option<usize> {
        if i < -(n as isize) || i > n as isize + 1 || k.abs() > n as isize + 1 {
            None
        } else {
            lookup[slot(n, i, k)]
        }
    };
    let pos = |i: f64, k: f64| ((i - 0.5) * h, k * h);
    let mut t = Triplets::new(nodes.len());
    let mut stamp = |pairs: &[(Option<usize>, Option<usize>, C64)]| {
        for &(a, b, v) in pairs {
            if let (Some(a), Some(b)) = (a, b) {
                t.push(a, b, v);
            }
        }
    };
    for k in -(n as isize) - 1..=n as isize + 1 {
        for i in -(n as isize)..=n as isize + 1 {
            let here = idx(i, k);
            // X face
            let (east, north) = (idx(i + 1, k), idx(i, k + 1));
            if here.is_some() || east.is_some() {
                let (x, y) = pos(i as f64 + 0.5, k as f64);
                let a = fit.flux(x, y)[0];
                stamp(&[(here, here, a), (east, east, a), (here, east, -a), (east, here, -a)]);
            }
            if here.is_some() || north.is_some() {
                let (x, y) = pos(i as f64, k as f64 + 0.5);
                let a = fit.flux(x, y)[2];
                stamp(&[(here, here, a), (north, north, a), (here, north, -a), (north, here, -a)]);
            }
            // mixed term on the cell with lower-left corner (i, k)
            let corners = [(here, -1.0, -1.0), (east, 1.0, -1.0), (north, -1.0, 1.0), (idx(i + 1, k + 1), 1.0, 1.0)];
            if corners.iter().any(|c| c.0.is_some()) {
                let (x, y) = pos(i as f64 + 0.5, k as f64 + 0.5);
                let a12 = fit.flux(x, y)[1];
                if a12 != c(0.0) {
                    for &(p, sxp, syp) in &corners {
                        for &(q, sxq, syq) in &corners {
                            stamp(&[(p, q, a12 * (0.25 * (sxp * syq + syp * sxq)))]);
                        }
                    }
                }
            }
            if let Some(a) = here {
                let (x, y) = pos(i as f64, k as f64);
                stamp(&[(Some(a), Some(a), c(h * h * fit.potential(x, y) * fit.volume(x, y)))]);
            }
        }
    }
    let band = t.to_band();
    let lu = band.factor()?;

    let points: Vec<[f64; 2]> = nodes.iter().map(|&(i, k)| [(i as f64 - 0.5) * h, k as f64 * h]).collect();
    let samples = points.iter().map(|p| fit.metric(p[0], p[1])).collect();
    let potential = points.iter().map(|p| fit.potential(p[0], p[1])).collect();
    let metric = ComplexMetric2D::new(Chart::Cartesian, points, samples, potential)?;
    let empty = Ghost { first: (CMat::zeros(0, 0), CMat::zeros(0, 0)), second: (CMat::zeros(0, 0), CMat::zeros(0, 0)) };
    let mut disk =
        DiskProblem { slice: slice.clone(), fit, beta, n, h, radius, nodes, lookup, metric, band, lu, ghost: [empty.clone(), empty], source: CMat::zeros(0, 0) };
    for (side, d) in [(0, 1isize), (1, -1)] {
        let solve = |k: isize, l: isize| -> Result<CMat> {
            let inv = inverse(&disk.line_block(k, l)).ok_or_else(|| Error::SolveFailed(format!("line coupling {k} → {l} is singular")))?;
            Ok(-inv)
        };
        let (a, b) = (solve(d, 0)?, solve(0, -d)?);
        disk.ghost[side] = Ghost {
            first: (&a * disk.line_block(d, d), &a * disk.line_block(d, 2 * d)),
            second: (&b * disk.line_block(0, 0), &b * disk.line_block(0, d)),
        };
    }
    disk.source = disk.jump_source_matrix()?;
    Ok(disk)
}

fn slot(n: usize, i: isize, k: isize) -> usize {
    let cols = 2 * n as isize + 2;
    ((k + n as isize + 1) * cols + (i + n as isize)) as usize
}

impl DiskProblem {
    pub fn fit(&self) -> &ParityFit {
        &self.fit
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn slice(&self) -> &LatticeSlice {
        &self.slice
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn metric(&self) -> &ComplexMetric2D {
        &self.metric
    }

    /// Number of unknowns.
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn bandwidth(&self) -> usize {
        self.band.bandwidth()
    }

    /// Nodes on `Y = 0`; twice the slice length.
    pub fn boundary_len(&self) -> usize {
        2 * self.n
    }

    /// `X` of the boundary nodes, ascending.
    pub fn boundary_points(&self) -> Vec<f64> {
        (0..self.boundary_len()).map(|b| (self.boundary_column(b) as f64 - 0.5) * self.h).collect()
    }

    fn boundary_column(&self, b: usize) -> isize {
        b as isize - self.n as isize + 1
    }

    fn index(&self, i: isize, k: isize) -> Option<usize> {
        let n = self.n as isize;
        if i < -n || i > n + 1 || k.abs() > n + 1 {
            None
        } else {
            self.lookup[slot(self.n, i, k)]
        }
    }

    /// Volume weights `h²|k|^{1/2}` per unknown.
    pub fn volume_weights(&self) -> Vec<f64> {
        self.metric.points().iter().map(|p| self.h * self.h * self.fit.volume(p[0], p[1])).collect()
    }

    /// `u^H A u`.
    pub fn form(&self, u: &[C64]) -> C64 {
        let au = self.band.matvec(u);
        u.iter().zip(&au).map(|(a, b)| a.conj() * b).sum()
    }

    /// `(τ, c)` of the complex normal `∂_n = iτ ∂_X − c ∂_Y` at a boundary
    /// point; `Im n` is tangent to `Y = 0`.
    pub fn normal(&self, x: f64) -> (f64, f64) {
        let k = self.fit.metric(x, 0.0);
        // k^{YY} = k_XX / det is real on Y = 0
        let det = (k[0] * k[2] - k[1] * k[1]).re;
        let scale = 1.0 / det.sqrt();
        (k[1].im * scale, scale)
    }

    /// Real and imaginary parts of `n` in the `(X, Y)` basis; the imaginary
    /// part has no `Y` component.
    pub fn normal_vector(&self, x: f64) -> [C64; 2] {
        let k = self.fit.metric(x, 0.0);
        let det = k[0] * k[2] - k[1] * k[1];
        // n^a = −k^{aY}/(k^{YY})^{1/2}
        let inv_xy = -k[1] / det;
        let inv_yy = k[0] / det;
        let root = inv_yy.sqrt();
        [-inv_xy / root, -inv_yy / root]
    }

    /// Centered difference along the boundary, zero beyond the wall.
    fn tangential(&self) -> CMat {
        let m = self.boundary_len();
        let mut d = CMat::zeros(m, m);
        for b in 0..m {
            if b > 0 {
                d[(b, b - 1)] = c(-0.5 / self.h);
            }
            if b + 1 < m {
                d[(b, b + 1)] = c(0.5 / self.h);
            }
        }
        d
    }

    /// `S = [[2i b*, −1], [1, 0]]` with `b = τ ∂_X` and `b* = −∂_X τ`,
    /// discretized term by term.
    pub fn continuum_source_matrix(&self) -> CMat {
        let m = self.boundary_len();
        let tau: Vec<f64> = self.boundary_points().iter().map(|&x| self.normal(x).0).collect();
        let b_star = -(self.tangential() * real_diag(&tau));
        let id = CMat::identity(m, m);
        block2(&(b_star * (I * 2.0)), &(-&id), &id, &CMat::zeros(m, m))
    }

    /// The `S` used by the layer source: the matrix for which the ghost
    /// continuations from both sides of a layer potential differ by exactly
    /// `−g` in the centered trace. Equal to [`Self::continuum_source_matrix`]
    /// without shift.
    pub fn source_matrix(&self) -> &CMat {
        &self.source
    }

    fn jump_source_matrix(&self) -> Result<CMat> {
        let m = self.boundary_len();
        let xs = self.boundary_points();
        let (tau, cn): (Vec<f64>, Vec<f64>) = xs.iter().map(|&x| self.normal(x)).unzip();
        let g = CMat::identity(m, m) * c(self.h);
        let b = real_diag(&cn.iter().map(|v| -v / (2.0 * self.h)).collect::<Vec<_>>());
        let t = real_diag(&tau) * self.tangential() * I;
        let zero = CMat::zeros(m, m);
        let hstack = |a: &CMat, b: &CMat| {
            let mut out = CMat::zeros(m, 2 * m);
            out.view_mut((0, 0), (m, m)).copy_from(a);
            out.view_mut((0, m), (m, m)).copy_from(b);
            out
        };
        // line loads r_k = R_k S g of the centered trace
        let r1 = hstack(&zero, &(&b * &g));
        let rm1 = -&r1;
        let r0 = hstack(&g, &(t.adjoint() * &g));
        let inv = |k: isize, l: isize| {
            inverse(&self.line_block(k, l)).ok_or_else(|| Error::SolveFailed(format!("line coupling {k} → {l} is singular")))
        };
        let (l1, um1, u0, l0) = (inv(1, 0)?, inv(-1, 0)?, inv(0, 1)?, inv(0, -1)?);
        let d0 = self.line_block(0, 0);
        let w0 = -(&l1 * &r1) + &um1 * &rm1;
        let w1 = &u0 * (&r0 - &d0 * &um1 * &rm1);
        let wm1 = &l0 * (-&r0 + &d0 * &l1 * &r1);
        let jump_derivative = &b * (w1 - wm1) + &t * &w0;
        let mut jump = CMat::zeros(2 * m, 2 * m);
        jump.view_mut((0, 0), (m, 2 * m)).copy_from(&w0);
        jump.view_mut((m, 0), (m, 2 * m)).copy_from(&jump_derivative);
        inverse(&jump).map(|j| -j).ok_or_else(|| Error::SolveFailed("discrete jump map is singular".into()))
    }

    /// `γ^H G_Σ S g` for full-slice data `g = (g₀, g₁)`, boundary Gram `h`.
    pub fn layer_source(&self, g: &[C64]) -> Result<Vec<C64>> {
        let m = self.boundary_len();
        if g.len() != 2 * m {
            return Err(Error::DimensionMismatch { expected: 2 * m, found: g.len() });
        }
        let sg = &self.source * CVec::from_column_slice(g);
        let xs = self.boundary_points();
        let mut rhs = vec![c(0.0); self.dim()];
        let mut add = |node: Option<usize>, coef: C64, value: C64| {
            if let Some(a) = node {
                rhs[a] += coef.conj() * value;
            }
        };
        for b in 0..m {
            let i = self.boundary_column(b);
            let (tau, cn) = self.normal(xs[b]);
            add(self.index(i, 0), c(1.0), sg[b] * self.h);
            let v = sg[m + b] * self.h;
            add(self.index(i, 1), c(-cn / (2.0 * self.h)), v);
            add(self.index(i, -1), c(cn / (2.0 * self.h)), v);
            add(self.index(i + 1, 0), I * (tau / (2.0 * self.h)), v);
            add(self.index(i - 1, 0), I * (-tau / (2.0 * self.h)), v);
        }
        Ok(rhs)
    }

    /// `u = K_ext^{-1} γ* S g`.
    pub fn layer_potential(&self, g: &[C64]) -> Result<Vec<C64>> {
        self.lu.solve(&self.layer_source(g)?)
    }

    /// Restriction of the form to boundary columns of lines `k` and `l`.
    fn line_block(&self, k: isize, l: isize) -> CMat {
        let m = self.boundary_len();
        CMat::from_fn(m, m, |a, b| {
            match (self.index(self.boundary_column(a), k), self.index(self.boundary_column(b), l)) {
                (Some(r), Some(c)) => self.band.get(r, c),
                _ => C64::new(0.0, 0.0),
            }
        })
    }

    /// One-sided trace from `Y > 0` (`dir = 1`) or `Y < 0` (`dir = −1`): the
    /// solution on that side is continued to lines `0` and `−dir` by the
    /// homogeneous equations on lines `dir` and `0`, and the centered trace
    /// is applied to the continuation.
    fn one_sided_trace(&self, u: &[C64], dir: isize) -> Vec<C64> {
        let m = self.boundary_len();
        let line = |k: isize| {
            CVec::from_fn(m, |b, _| self.index(self.boundary_column(b), k).map_or(c(0.0), |a| u[a]))
        };
        let ghost = &self.ghost[usize::from(dir < 0)];
        let (u1, u2) = (line(dir), line(2 * dir));
        let u0 = &ghost.first.0 * &u1 + &ghost.first.1 * &u2;
        let back = &ghost.second.0 * &u0 + &ghost.second.1 * &u1;
        let (above, below) = if dir > 0 { (u1, back) } else { (back, u1) };
        let dx = self.tangential() * &u0;
        let xs = self.boundary_points();
        let mut out: Vec<C64> = u0.iter().copied().collect();
        for b in 0..m {
            let (tau, cn) = self.normal(xs[b]);
            out.push(I * tau * dx[b] - (above[b] - below[b]) * (cn / (2.0 * self.h)));
        }
        out
    }

    /// `(γ⁺u, γ⁻u)`, `Ω⁺ = {Y > 0}`.
    pub fn one_sided_traces(&self, u: &[C64]) -> (Vec<C64>, Vec<C64>) {
        (self.one_sided_trace(u, 1), self.one_sided_trace(u, -1))
    }

    /// `q = [[0, G_Σ], [G_Σ, 0]]` on full-slice data.
    pub fn charge(&self) -> CMat {
        let m = self.boundary_len();
        let g = CMat::identity(m, m) * c(self.h);
        block2(&CMat::zeros(m, m), &g, &g, &CMat::zeros(m, m))
    }

    /// Largest relative difference between the disk metric and the cylinder
    /// metric of the slice pushed forward by `(s, u) ↦ (u cos κs, u sin κs)`,
    /// over slice points in the annulus `L²/2 < u² < L²` and `angles` values
    /// of `κs`.
    pub fn overlap_defect(&self, angles: usize) -> f64 {
        let kappa = self.fit.kappa;
        let slice = &self.slice;
        let mut worst = 0.0_f64;
        for (j, &u) in slice.points().iter().enumerate() {
            if 2.0 * u * u <= self.radius * self.radius {
                continue;
            }
            let (n, w, h) = (slice.lapse()[j], slice.shift()[j], slice.metric_weight()[j].powi(2));
            let cyl = [C64::new(n * n - h * w * w, 0.0), C64::new(0.0, h * w), C64::new(h, 0.0)];
            for a in 0..angles {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / angles as f64;
                let (x, y) = (u * theta.cos(), u * theta.sin());
                // columns ∂/∂s, ∂/∂u of the chart map
                let jac = [[-kappa * y, x / u], [kappa * x, y / u]];
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                let inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
                let km = [[cyl[0], cyl[1]], [cyl[1], cyl[2]]];
                // k_cart = J^{-T} k_cyl J^{-1}
                let entry = |p: usize, q: usize| -> C64 {
                    let mut s = c(0.0);
                    for r in 0..2 {
                        for t in 0..2 {
                            s += km[r][t] * (inv[r][p] * inv[t][q]);
                        }
                    }
                    s
                };
                let disk = self.fit.metric(x, y);
                let pushed = [entry(0, 0), entry(0, 1), entry(1, 1)];
                for e in 0..3 {
                    worst = worst.max((disk[e] - pushed[e]).norm() / (1.0 + pushed[e].norm()));
                }
            }
        }
        worst
    }
}

/// `c_ext^± = ∓γ^± K_ext^{-1} γ* S` on full-slice data, columnwise.
pub fn calderon_disk(disk: &DiskProblem) -> Result<(CMat, CMat)> {
    let dim = 2 * disk.boundary_len();
    let columns: Vec<(Vec<C64>, Vec<C64>)> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let mut g = vec![c(0.0); dim];
            g[i] = c(1.0);
            let u = disk.layer_potential(&g)?;
            Ok(disk.one_sided_traces(&u))
        })
        .collect::<Result<_>>()?;
    let mut plus = CMat::zeros(dim, dim);
    let mut minus = CMat::zeros(dim, dim);
    for (i, (p, m)) in columns.iter().enumerate() {
        for r in 0..dim {
            plus[(r, i)] = -p[r];
            minus[(r, i)] = m[r];
        }
    }
    Ok((plus, minus))
}

/// `λ_HHI^± = ±q c_ext^±` on full-slice data `(f₀, f₁)`, lapse frame.
pub fn hhi_covariances(disk: &DiskProblem) -> Result<CovariancePair> {
    let (plus, minus) = calderon_disk(disk)?;
    CovariancePair::from_projectors(&disk.charge(), &plus, &minus, Frame::Lapse)
}

/// Wedge-doubled double KMS covariances `λ_D^±` of the slice at the disk's
/// `β`, in full-slice order.
pub fn double_kms_full_slice(disk: &DiskProblem) -> Result<CovariancePair> {
    let sys = lapse_reduce(&assemble_spatial(&disk.slice)?)?;
    let pair = double_kms_covariances(&sys, disk.beta)?;
    to_full_slice(&wedge_double(&pair, &WedgeReflection::unchecked(disk.n))?)
}

/// `C^∞` bump on `[a, b]`.
pub fn bump(y: f64, a: f64, b: f64) -> f64 {
    let t = (2.0 * y - a - b) / (b - a);
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// Full-slice test data built from a bump on `[a, b]` in `|y|`: value data,
/// momentum data, each on one wedge, and a two-sided mix.
pub fn gluing_test_data(points: &[f64], a: f64, b: f64) -> Vec<CVec> {
    let m = points.len();
    let right: Vec<f64> = points.iter().map(|&x| if x > 0.0 { bump(x, a, b) } else { 0.0 }).collect();
    let left: Vec<f64> = points.iter().map(|&x| if x < 0.0 { bump(-x, a, b) } else { 0.0 }).collect();
    let vec_of = |f0: &dyn Fn(usize) -> C64, f1: &dyn Fn(usize) -> C64| {
        CVec::from_fn(2 * m, |r, _| if r < m { f0(r) } else { f1(r - m) })
    };
    let zero = |_: usize| c(0.0);
    vec![
        vec_of(&|j| c(right[j]), &zero),
        vec_of(&zero, &|j| c(right[j])),
        vec_of(&|j| c(left[j]), &zero),
        vec_of(&zero, &|j| c(left[j])),
        vec_of(&|j| c(right[j]) + I * left[j], &|j| c(0.5 * right[j]) - c(left[j])),
    ]
}

/// `(λ_HHI⁺ f, λ_HHI⁻ f)` by one layer solve, without forming the projectors.
pub fn hhi_apply(disk: &DiskProblem, f: &CVec) -> Result<(CVec, CVec)> {
    let u = disk.layer_potential(f.as_slice())?;
    let (plus, minus) = disk.one_sided_traces(&u);
    let q = disk.charge();
    // λ⁺ = q c⁺ = −q γ⁺u and λ⁻ = −q c⁻ = −q γ⁻u
    Ok((-(&q * CVec::from_vec(plus)), -(&q * CVec::from_vec(minus))))
}

/// Relative differences `‖(λ_HHI − λ_D)f‖ / ‖λ_D f‖` over test data.
#[derive(Debug, Clone)]
pub struct GluingReport {
    pub boundary_nodes: usize,
    pub spacing: f64,
    /// Per test vector, the larger of the `+` and `−` relative errors.
    pub errors: Vec<f64>,
    /// `‖(λ⁺f)|Σ⁻‖ / ‖λ⁺f‖` for value data `f` on `Σ⁺` (the first test
    /// vector), disk and cylinder.
    pub cross_wedge: (f64, f64),
}

impl GluingReport {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().fold(0.0, |m, e| m.max(*e))
    }
}

/// Compares `λ_HHI` of `disk` with the full-slice `λ_D` on `data`.
pub fn gluing_comparison(disk: &DiskProblem, lambda_d: &CovariancePair, data: &[CVec]) -> Result<GluingReport> {
    let dim = 2 * disk.boundary_len();
    if lambda_d.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: lambda_d.dim() });
    }
    let m = disk.boundary_len();
    let mut errors = Vec::with_capacity(data.len());
    let mut cross_wedge = (f64::NAN, f64::NAN);
    for (k, f) in data.iter().enumerate() {
        if f.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: f.len() });
        }
        let (hp, hm) = hhi_apply(disk, f)?;
        let (dp, dm) = (lambda_d.plus() * f, lambda_d.minus() * f);
        errors.push(((&hp - &dp).norm() / dp.norm()).max((&hm - &dm).norm() / dm.norm()));
        if k == 0 {
            let left = |v: &CVec| {
                let s: f64 = (0..dim).filter(|r| r % m < m / 2).map(|r| v[r].norm_sqr()).sum();
                s.sqrt() / v.norm()
            };
            cross_wedge = (left(&hp), left(&dp));
        }
    }
    Ok(GluingReport { boundary_nodes: m, spacing: disk.spacing(), errors, cross_wedge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SliceGrid, SliceProfile, ToyHorizon};

    fn toy(n: usize, epsilon: f64) -> LatticeSlice {
        LatticeSlice::sample(SliceGrid::staggered(1.0, n), &ToyHorizon::new(1.0, epsilon, 1.0), 1.0).unwrap()
    }

    #[test]
    fn flat_toy_extends_to_the_flat_disk() {
        let disk = extend_to_disk(&toy(8, 0.0), 2.0 * std::f64::consts::PI).unwrap();
        let fit = disk.fit();
        assert!((fit.kappa - 1.0).abs() < 1e-12 && fit.lapse_cubic.abs() < 1e-12 && fit.shift == 0.0);
        for p in disk.metric().metric() {
            assert!((p[0] - c(1.0)).norm() < 1e-12 && p[1].norm() < 1e-12 && (p[2] - c(1.0)).norm() < 1e-12);
        }
        assert_eq!(disk.metric().sectorial_constant(), 0.0);
        assert!(disk.overlap_defect(16) < OVERLAP_TOL);
    }

    #[test]
    fn shifted_toy_has_the_cross_term() {
        let disk = extend_to_disk(&toy(8, 0.3), 2.0 * std::f64::consts::PI).unwrap();
        assert!((disk.fit().shift - 0.3).abs() < 1e-12);
        let k = disk.fit().metric(0.4, 0.2);
        // i(b/κ)(X² − Y²) off the diagonal
        assert!((k[1].im - 0.3 * (0.16 - 0.04)).abs() < 1e-14);
        assert!(disk.overlap_defect(16) < OVERLAP_TOL);
        for x in disk.boundary_points() {
            let n = disk.normal_vector(x);
            assert!(n[1].im.abs() <= 1e-12);
        }
    }

    #[test]
    fn even_lapse_term_is_a_parity_violation() {
        struct Bent;
        impl SliceProfile for Bent {
            fn lapse(&self, y: f64) -> f64 {
                y + 0.2 * y * y
            }
            fn potential(&self, _y: f64) -> f64 {
                1.0
            }
        }
        let slice = LatticeSlice::sample(SliceGrid::staggered(1.0, 8), &Bent, 1.0).unwrap();
        assert!(matches!(
            extend_to_disk(&slice, 2.0 * std::f64::consts::PI),
            Err(Error::ParityViolation { .. })
        ));
    }

    #[test]
    fn wrong_beta_is_rejected() {
        assert!(matches!(extend_to_disk(&toy(8, 0.0), 1.0), Err(Error::WrongTemperature { .. })));
    }

    #[test]
    fn flat_form_is_the_five_point_laplacian() {
        let disk = extend_to_disk(&toy(6, 0.0), 2.0 * std::f64::consts::PI).unwrap();
        let u: Vec<C64> = (0..disk.dim()).map(|i| C64::new((0.3 * i as f64).sin(), 0.2)).collect();
        let q = disk.form(&u);
        assert!(q.re > 0.0 && q.im.abs() < 1e-12 * q.re);
    }
    #[test]
    fn unshifted_source_is_the_continuum_source() {
        let disk = extend_to_disk(&toy(8, 0.0), 2.0 * std::f64::consts::PI).unwrap();
        let diff = disk.source_matrix() - disk.continuum_source_matrix();
        let worst = diff.camax();
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn layer_potential_jumps_by_its_density() {
        let disk = extend_to_disk(&toy(8, 0.3), 2.0 * std::f64::consts::PI).unwrap();
        let m = disk.boundary_len();
        let g: Vec<C64> = (0..2 * m).map(|j| C64::new((0.7 * j as f64).cos(), 0.1 * j as f64)).collect();
        let u = disk.layer_potential(&g).unwrap();
        let (plus, minus) = disk.one_sided_traces(&u);
        for j in 0..2 * m {
            assert!((plus[j] - minus[j] + g[j]).norm() < 1e-10, "component {j}");
        }
    }
}
