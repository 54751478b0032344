//! The Wick-rotated operator on the periodic cylinder `S_β × Σ⁺` and its
//! Calderón projectors by direct solves.
//!
//! `K = −(∂_s + i w*) N^{-2} (∂_s − i w) + h₀` is discretized through its
//! bilinear form `Σ_k (B₀u_k + B₁u_{k+1})^T M (B₀u_k + B₁u_{k+1}) + Δs u_k^T G̃ h₀ u_k`
//! with `B₀ = −1/Δs − (i/2)w`, `B₁ = 1/Δs − (i/2)w` and `M = Δs G̃ N^{-2}`,
//! `G̃ = NρΔy`. The form matrix `A = W K`, `W = Δs G̃`, is complex symmetric
//! with positive definite real part, so it is factored without pivoting. The
//! `s` lines are stored in folded order so the periodic coupling stays banded.

use rayon::prelude::*;

use super::metric::{wick_rotate, ComplexMetric2D};
use crate::calderon::{lapse_thermal, CalderonPair, Frame};
use crate::error::{Error, Result};
use crate::linalg::{c, op_norm, real_diag, BandLu, BandMatrix, CMat, GramSpace, Triplets, C64, I};
use crate::model::{assemble_spatial, lapse_reduce, FirstOrderSystem, LatticeSlice, SpatialOperators};

/// One row of a sparse trace map: `(unknown, coefficient)` pairs.
type SparseRow = Vec<(usize, C64)>;

/// `‖c⁺ + c⁻ − 1‖` must stay below `JUMP_BOUND_FACTOR · Δs · λ_max`, where
/// `λ_max` is the largest `|λ|` of the generator.
pub const JUMP_BOUND_FACTOR: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct CylinderProblem {
    beta: f64,
    n_s: usize,
    ds: f64,
    ny: usize,
    ops: SpatialOperators,
    system: FirstOrderSystem,
    metric: ComplexMetric2D,
    diag_block: CMat,
    upper_block: CMat,
    band: BandMatrix,
    lu: BandLu,
}

/// Position of `s` line `k` in the folded ordering.
fn folded(k: usize, n_s: usize) -> usize {
    if k < n_s / 2 {
        2 * k
    } else {
        2 * (n_s - 1 - k) + 1
    }
}

pub fn assemble_cylinder(slice: &LatticeSlice, beta: f64, n_s: usize) -> Result<CylinderProblem> {
    if n_s % 2 != 0 || n_s < 8 {
        return Err(Error::GridMisaligned(format!(
            "N_s = {n_s} must be even and at least 8 so that s = β/2 is a grid line"
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::GridMisaligned(format!("β = {beta} is not a positive period")));
    }
    let metric = wick_rotate(slice)?;
    let ops = assemble_spatial(slice)?;
    let system = lapse_reduce(&ops)?;
    let ny = slice.len();
    let ds = beta / n_s as f64;
    let gt = ops.gram_htilde();
    let m = real_diag(&gt.iter().zip(slice.lapse()).map(|(g, n)| ds * g / (n * n)).collect::<Vec<_>>());
    let id = CMat::identity(ny, ny);
    let half_w = ops.w_op() * (I * 0.5);
    let b0 = &id * c(-1.0 / ds) - &half_w;
    let b1 = &id * c(1.0 / ds) - &half_w;
    let mass = real_diag(&gt.iter().map(|g| ds * g).collect::<Vec<_>>()) * ops.h0();
    let diag_block = b0.transpose() * &m * &b0 + b1.transpose() * &m * &b1 + mass;
    let upper_block = b0.transpose() * &m * &b1;
    let lower_block = upper_block.transpose();

    let dim = n_s * ny;
    let mut t = Triplets::new(dim);
    for k in 0..n_s {
        let row = folded(k, n_s) * ny;
        let next = folded((k + 1) % n_s, n_s) * ny;
        for a in 0..ny {
            for b in 0..ny {
                t.push(row + a, row + b, diag_block[(a, b)]);
                t.push(row + a, next + b, upper_block[(a, b)]);
                t.push(next + a, row + b, lower_block[(a, b)]);
            }
        }
    }
    let band = t.to_band();
    let lu = band.factor()?;
    Ok(CylinderProblem { beta, n_s, ds, ny, ops, system, metric, diag_block, upper_block, band, lu })
}

impl CylinderProblem {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dim(&self) -> usize {
        self.n_s * self.ny
    }

    pub fn spatial(&self) -> &SpatialOperators {
        &self.ops
    }

    pub fn system(&self) -> &FirstOrderSystem {
        &self.system
    }

    pub fn metric(&self) -> &ComplexMetric2D {
        &self.metric
    }

    pub fn bandwidth(&self) -> usize {
        self.band.bandwidth()
    }

    /// Unknown index of point `j` on line `k` (taken mod `N_s`).
    pub fn index(&self, k: isize, j: usize) -> usize {
        let n = self.n_s as isize;
        folded(k.rem_euclid(n) as usize, self.n_s) * self.ny + j
    }

    /// Volume weights `Δs NρΔy` per unknown.
    pub fn volume_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.dim()];
        for k in 0..self.n_s as isize {
            for j in 0..self.ny {
                w[self.index(k, j)] = self.ds * self.ops.gram_htilde()[j];
            }
        }
        w
    }

    /// `u^H A u`, the sesquilinear form of the operator.
    pub fn form(&self, u: &[C64]) -> C64 {
        let au = self.band.matvec(u);
        u.iter().zip(&au).map(|(a, b)| a.conj() * b).sum()
    }

    /// Solves `A u = rhs`, i.e. `K u = W^{-1} rhs`.
    pub fn solve_form(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        self.lu.solve(rhs)
    }

    /// `K̂(θ) = W^{-1}(D + U e^{iθ} + U^T e^{−iθ})` on one `s` line.
    pub fn fourier_symbol(&self, theta: f64) -> CMat {
        let e = C64::from_polar(1.0, theta);
        let a = &self.diag_block + &self.upper_block * e + self.upper_block.transpose() * e.conj();
        let w_inv = real_diag(&self.ops.gram_htilde().iter().map(|g| 1.0 / (self.ds * g)).collect::<Vec<_>>());
        w_inv * a
    }

    /// `‖N K̂(θ) N − sin²(θ/2) h̃₀ − cos²(θ/2) p(−i k)‖ / ‖p(−i k)‖` with
    /// `k = 2 tan(θ/2)/Δs`, the modewise form of the pencil relation.
    pub fn pencil_identity_defect(&self, theta: f64) -> f64 {
        let n = real_diag(self.ops.lapse());
        let k = 2.0 * (0.5 * theta).tan() / self.ds;
        let p = self.system.quadratic_pencil(C64::new(0.0, -k));
        let (sin2, cos2) = ((0.5 * theta).sin().powi(2), (0.5 * theta).cos().powi(2));
        let lhs = &n * self.fourier_symbol(theta) * &n - self.system.h0() * c(sin2);
        op_norm(&(lhs - &p * c(cos2))) / op_norm(&p)
    }

    /// Discrete Fourier angles `2πm/N_s`, excluding the Nyquist mode where
    /// `tan(θ/2)` is infinite.
    pub fn fourier_angles(&self) -> Vec<f64> {
        (0..self.n_s)
            .filter(|&m| 2 * m != self.n_s)
            .map(|m| 2.0 * std::f64::consts::PI * m as f64 / self.n_s as f64)
            .collect()
    }

    /// Centered trace `(u(line), ∓N^{-1}(∂_s − i w)u(line))` with the minus
    /// sign at `s = 0` and the plus sign at `s = β/2`.
    fn centered_trace(&self, line: isize, sign: f64) -> Vec<SparseRow> {
        let ny = self.ny;
        let lapse = self.ops.lapse();
        let w = self.ops.w_op();
        let mut rows = Vec::with_capacity(2 * ny);
        for j in 0..ny {
            rows.push(vec![(self.index(line, j), c(1.0))]);
        }
        for j in 0..ny {
            let inv = 1.0 / lapse[j];
            let mut row = vec![
                (self.index(line + 1, j), c(sign * inv / (2.0 * self.ds))),
                (self.index(line - 1, j), c(-sign * inv / (2.0 * self.ds))),
            ];
            for l in 0..ny {
                if w[(j, l)] != c(0.0) {
                    row.push((self.index(line, l), -I * sign * inv * w[(j, l)]));
                }
            }
            rows.push(row);
        }
        rows
    }

    /// `S^{(0)}` (`sign = 1`) or `S^{(β/2)}` (`sign = −1`):
    /// `[[±2i N w* N^{-2}, −1], [1, 0]]`.
    fn source_matrix(&self, sign: f64) -> CMat {
        let n = real_diag(self.ops.lapse());
        let n_inv2 = real_diag(&self.ops.lapse().iter().map(|x| 1.0 / (x * x)).collect::<Vec<_>>());
        let top = n * self.ops.w_star() * n_inv2 * (I * 2.0 * sign);
        let id = CMat::identity(self.ny, self.ny);
        crate::linalg::block2(&top, &(-&id), &id, &CMat::zeros(self.ny, self.ny))
    }

    /// One-sided trace from lines `line + dir`, `line + 2dir`, `line + 3dir`
    /// by quadratic extrapolation; `sign` as in the centered trace.
    fn one_sided_trace(&self, u: &[C64], line: isize, dir: isize, sign: f64) -> Vec<C64> {
        let ny = self.ny;
        let d = dir as f64;
        let mut val = vec![c(0.0); ny];
        let mut der = vec![c(0.0); ny];
        for j in 0..ny {
            let u1 = u[self.index(line + dir, j)];
            let u2 = u[self.index(line + 2 * dir, j)];
            let u3 = u[self.index(line + 3 * dir, j)];
            val[j] = u1 * 3.0 - u2 * 3.0 + u3;
            der[j] = (u1 * -5.0 + u2 * 8.0 - u3 * 3.0) * (d / (2.0 * self.ds));
        }
        let w = self.ops.w_op();
        let mut out = val.clone();
        for j in 0..ny {
            let wv: C64 = (0..ny).map(|l| w[(j, l)] * val[l]).sum();
            out.push((der[j] - I * wv) * (sign / self.ops.lapse()[j]));
        }
        out
    }

    /// Right-hand side `γ^H G_Σ S g` for two-copy data `g`, ordered
    /// `(g^{(0)}, g^{(β/2)})` with boundary Gram `ρΔy` on both components.
    pub fn layer_source(&self, g: &[C64]) -> Result<Vec<C64>> {
        let ny = self.ny;
        if g.len() != 4 * ny {
            return Err(Error::DimensionMismatch { expected: 4 * ny, found: g.len() });
        }
        let gram = self.ops.gram_h();
        let mut rhs = vec![c(0.0); self.dim()];
        let half = (self.n_s / 2) as isize;
        for (copy, (line, sign)) in [(0isize, -1.0), (half, 1.0)].into_iter().enumerate() {
            let s = self.source_matrix(if copy == 0 { 1.0 } else { -1.0 });
            let data = crate::linalg::CVec::from_column_slice(&g[copy * 2 * ny..(copy + 1) * 2 * ny]);
            let h = s * data;
            let rows = self.centered_trace(line, sign);
            for (r, row) in rows.iter().enumerate() {
                let weighted = h[r] * gram[r % ny];
                for &(idx, coef) in row {
                    rhs[idx] += coef.conj() * weighted;
                }
            }
        }
        Ok(rhs)
    }

    /// `u = K^{-1} γ* S g`.
    pub fn layer_potential(&self, g: &[C64]) -> Result<Vec<C64>> {
        self.solve_form(&self.layer_source(g)?)
    }

    /// `(γ⁺u, γ⁻u)` on both copies.
    pub fn one_sided_traces(&self, u: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let half = (self.n_s / 2) as isize;
        let mut plus = self.one_sided_trace(u, 0, 1, -1.0);
        plus.extend(self.one_sided_trace(u, half, -1, 1.0));
        let mut minus = self.one_sided_trace(u, 0, -1, -1.0);
        minus.extend(self.one_sided_trace(u, half, 1, 1.0));
        (plus, minus)
    }

    /// Mesh-dependent bound on the jump defect.
    pub fn jump_bound(&self) -> f64 {
        let lambda_max = self.system.spectral().mode_eigenvalues().iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        JUMP_BOUND_FACTOR * self.ds * lambda_max
    }
}

/// `c^± = ∓γ^± K^{-1} γ* S`, column by column, in the lapse frame.
///
/// Defects are measured in the energy norm of the matching spectral pair.
pub fn calderon_elliptic(prob: &CylinderProblem) -> Result<CalderonPair> {
    let pair = calderon_elliptic_unchecked(prob)?;
    let defect = pair.complementarity_defect();
    let bound = prob.jump_bound();
    if !(defect <= bound) {
        return Err(Error::JumpDefect { defect, bound });
    }
    Ok(pair)
}

/// [`calderon_elliptic`] without the jump check.
pub fn calderon_elliptic_unchecked(prob: &CylinderProblem) -> Result<CalderonPair> {
    let dim = 4 * prob.ny;
    let columns: Vec<(Vec<C64>, Vec<C64>)> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let mut g = vec![c(0.0); dim];
            g[i] = c(1.0);
            let u = prob.layer_potential(&g)?;
            Ok(prob.one_sided_traces(&u))
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
    let gram = lapse_thermal(&prob.system, prob.beta)?.gram().clone();
    CalderonPair::new(plus, minus, Frame::Lapse, Some(prob.beta), gram)
}

/// Relative distance between the elliptic and the spectral `c⁺` at one
/// cylinder resolution, both norms taken in the energy Gram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalderonError {
    pub n_s: usize,
    pub error_fro: f64,
    pub error_op: f64,
}

pub fn compare_calderon(slice: &LatticeSlice, beta: f64, n_s: usize) -> Result<CalderonError> {
    let prob = assemble_cylinder(slice, beta, n_s)?;
    let elliptic = calderon_elliptic(&prob)?;
    let spectral = lapse_thermal(&prob.system, beta)?;
    let space = GramSpace::new(spectral.gram().clone())?;
    let diff = space.to_orthonormal(&(elliptic.plus() - spectral.plus()));
    let reference = space.to_orthonormal(spectral.plus());
    Ok(CalderonError {
        n_s,
        error_fro: diff.norm() / reference.norm(),
        error_op: op_norm(&diff) / op_norm(&reference),
    })
}
