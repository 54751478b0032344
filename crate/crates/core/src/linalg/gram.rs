//! Operators that are Hermitian for a positive definite Gram form, and their
//! functional calculus.
//!
//! The generalized problem is reduced with the Cholesky factor `gram = L L^H`:
//! `A = L^H op L^{-H}` is Hermitian, and its eigenvectors `v` give the
//! gram-orthonormal eigenvectors `r = L^{-H} v` of `op`. Every function of the
//! operator is then `R f(Λ) R^H gram`.

use std::ops::Range;

use nalgebra::Cholesky;

use super::{c, CMat, CVec, C64};
use crate::error::{Error, Result};

/// Relative tolerance for the self-adjointness and Hermiticity checks.
pub const SELF_ADJOINT_TOL: f64 = 1e-12;
/// Eigenvalues with `|λ| < KERNEL_TOL · max|λ|` count as kernel.
pub const KERNEL_TOL: f64 = 1e-12;
/// Relative gap below which neighbouring eigenvalues share one projection.
const CLUSTER_TOL: f64 = 1e-10;

/// A finite-dimensional Hilbert space `C^n` with inner product `u^H G v`.
#[derive(Debug, Clone)]
pub struct GramSpace {
    gram: CMat,
    chol: CMat,
}

impl GramSpace {
    pub fn new(gram: CMat) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.nrows(), found: gram.ncols() });
        }
        let scale = gram.norm().max(f64::MIN_POSITIVE);
        if super::hermitian_defect(&gram) > SELF_ADJOINT_TOL * scale {
            return Err(Error::DegenerateGram);
        }
        let sym = super::hermitian_part(&gram);
        let chol = Cholesky::new(sym.clone()).ok_or(Error::DegenerateGram)?.l();
        // complex square roots of negative pivots come back almost imaginary
        if chol.diagonal().iter().any(|d| !(d.re > 1e6 * d.im.abs()) || !d.re.is_finite()) {
            return Err(Error::DegenerateGram);
        }
        Ok(Self { gram: sym, chol })
    }

    pub fn identity(dim: usize) -> Self {
        Self { gram: CMat::identity(dim, dim), chol: CMat::identity(dim, dim) }
    }

    pub fn from_diagonal(weights: &[f64]) -> Result<Self> {
        Self::new(super::real_diag(weights))
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    /// Lower Cholesky factor `L` with `gram = L L^H`.
    pub fn cholesky_factor(&self) -> &CMat {
        &self.chol
    }

    pub fn inner(&self, u: &CVec, v: &CVec) -> C64 {
        (u.adjoint() * &self.gram * v)[(0, 0)]
    }

    /// `L^H A L^{-H}`: the matrix of `A` in a gram-orthonormal basis.
    pub fn to_orthonormal(&self, a: &CMat) -> CMat {
        let b = self.chol.adjoint() * a;
        // (L^{-1} B^H)^H = B L^{-H}
        let x = self
            .chol
            .solve_lower_triangular(&b.adjoint())
            .expect("Cholesky factor has a positive diagonal");
        x.adjoint()
    }

    /// Operator norm induced by the gram form.
    pub fn op_norm(&self, a: &CMat) -> f64 {
        super::op_norm(&self.to_orthonormal(a))
    }

    /// Gram adjoint `G^{-1} A^H G`.
    pub fn adjoint(&self, a: &CMat) -> CMat {
        let rhs = a.adjoint() * &self.gram;
        let y = self.chol.solve_lower_triangular(&rhs).expect("positive diagonal");
        self.chol.adjoint().solve_upper_triangular(&y).expect("positive diagonal")
    }

    /// Condition number of the gram matrix.
    pub fn condition(&self) -> f64 {
        let ev = self.gram.symmetric_eigenvalues();
        ev.max() / ev.min()
    }
}

/// An operator that is self-adjoint for a [`GramSpace`], with its spectral
/// decomposition.
#[derive(Debug, Clone)]
pub struct SpectralSystem {
    space: GramSpace,
    op: CMat,
    modes: Vec<f64>,
    vectors: CMat,
    coords: CMat,
    clusters: Vec<Range<usize>>,
}

/// Spectral decomposition without the kernel check.
fn decompose(op: &CMat, space: &GramSpace) -> Result<(Vec<f64>, CMat)> {
    let n = space.dim();
    if op.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, found: op.nrows() });
    }
    let gop = space.gram() * op;
    let defect = super::hermitian_defect(&gop);
    let tolerance = SELF_ADJOINT_TOL * gop.norm();
    if defect > tolerance {
        return Err(Error::NotSelfAdjoint { defect, tolerance });
    }
    let a = super::hermitian_part(&space.to_orthonormal(op));
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let modes: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let v = CMat::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    let vectors = space
        .cholesky_factor()
        .adjoint()
        .solve_upper_triangular(&v)
        .ok_or(Error::DegenerateGram)?;
    Ok((modes, vectors))
}

/// Eigenvalues (ascending) of an operator self-adjoint for `space`; zero
/// eigenvalues are allowed.
pub fn gram_eigenvalues(op: &CMat, space: &GramSpace) -> Result<Vec<f64>> {
    decompose(op, space).map(|(m, _)| m)
}

/// Eigenvalues (ascending) of the Hermitian form `form` relative to the gram
/// form of `space`: the `μ` with `form v = μ gram v`.
pub fn generalized_eigenvalues(form: &CMat, space: &GramSpace) -> Result<Vec<f64>> {
    let n = space.dim();
    if form.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, found: form.nrows() });
    }
    let l = space.cholesky_factor();
    let y = l.solve_lower_triangular(&super::hermitian_part(form)).ok_or(Error::DegenerateGram)?;
    let a = l.solve_lower_triangular(&y.adjoint()).ok_or(Error::DegenerateGram)?;
    Ok(super::hermitian_eigenvalues(&a))
}

/// Spectral decomposition of `op`, which must be self-adjoint for `space` and
/// have no eigenvalue in the kernel tolerance.
pub fn gram_eigendecompose(op: &CMat, space: &GramSpace) -> Result<SpectralSystem> {
    let (modes, vectors) = decompose(op, space)?;
    let max = modes.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let tolerance = KERNEL_TOL * max;
    if let Some(&bad) = modes.iter().find(|v| !(v.abs() > tolerance)) {
        return Err(Error::KernelViolation { eigenvalue: bad, tolerance });
    }
    let coords = vectors.adjoint() * space.gram();
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..=modes.len() {
        if k == modes.len() || modes[k] - modes[k - 1] > CLUSTER_TOL * max {
            clusters.push(start..k);
            start = k;
        }
    }
    Ok(SpectralSystem { space: space.clone(), op: op.clone(), modes, vectors, coords, clusters })
}

impl SpectralSystem {
    pub fn space(&self) -> &GramSpace {
        &self.space
    }

    pub fn op(&self) -> &CMat {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    /// Distinct eigenvalues, ascending (cluster means).
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.clusters
            .iter()
            .map(|r| self.modes[r.clone()].iter().sum::<f64>() / r.len() as f64)
            .collect()
    }

    /// One eigenvalue per eigenvector, ascending.
    pub fn mode_eigenvalues(&self) -> &[f64] {
        &self.modes
    }

    /// Gram-orthonormal eigenvectors as columns, ordered like
    /// [`mode_eigenvalues`](Self::mode_eigenvalues).
    pub fn eigenvectors(&self) -> &CMat {
        &self.vectors
    }

    /// Coordinates in the eigenbasis: `coords · u` expands `u`.
    pub fn coordinates(&self) -> &CMat {
        &self.coords
    }

    /// Spectral projections, one per distinct eigenvalue.
    pub fn eigenprojections(&self) -> Vec<CMat> {
        self.clusters
            .iter()
            .map(|r| {
                let v = self.vectors.columns(r.start, r.len());
                let w = self.coords.rows(r.start, r.len());
                v * w
            })
            .collect()
    }

    /// `Σ f(λ_i) P_i`.
    pub fn apply_function<F>(&self, f: F) -> Result<CMat>
    where
        F: Fn(f64) -> C64,
    {
        let values = self.mode_values(f)?;
        Ok(self.from_mode_values(&values))
    }

    pub fn apply_real<F>(&self, f: F) -> Result<CMat>
    where
        F: Fn(f64) -> f64,
    {
        self.apply_function(|x| c(f(x)))
    }

    pub(crate) fn mode_values<F>(&self, f: F) -> Result<Vec<C64>>
    where
        F: Fn(f64) -> C64,
    {
        self.modes
            .iter()
            .map(|&lambda| {
                let v = f(lambda);
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::FunctionSingularAtEigenvalue { eigenvalue: lambda })
                }
            })
            .collect()
    }

    pub(crate) fn from_mode_values(&self, values: &[C64]) -> CMat {
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= values[k];
        }
        scaled * &self.coords
    }

    /// `‖op − Σ λ_i P_i‖ / ‖op‖` in the gram operator norm.
    pub fn reconstruction_error(&self) -> f64 {
        let values: Vec<C64> = self.modes.iter().map(|&l| c(l)).collect();
        let rebuilt = self.from_mode_values(&values);
        let scale = self.space.op_norm(&self.op);
        self.space.op_norm(&(&rebuilt - &self.op)) / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{op_norm, real_diag};

    fn swap() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
    }

    #[test]
    fn identity_has_one_projection() {
        let sys = gram_eigendecompose(&CMat::identity(3, 3), &GramSpace::identity(3)).unwrap();
        assert_eq!(sys.eigenvalues().len(), 1);
        assert!((sys.eigenvalues()[0] - 1.0).abs() < 1e-14);
        let p = sys.eigenprojections();
        assert_eq!(p.len(), 1);
        assert!(op_norm(&(&p[0] - CMat::identity(3, 3))) < 1e-14);
    }

    #[test]
    fn single_mode_generator_in_energy_gram() {
        let op = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(4.0), c(0.0)]);
        let space = GramSpace::new(real_diag(&[4.0, 1.0])).unwrap();
        let sys = gram_eigendecompose(&op, &space).unwrap();
        let ev = sys.eigenvalues();
        assert!((ev[0] + 2.0).abs() < 1e-13 && (ev[1] - 2.0).abs() < 1e-13);
        let p_plus = &sys.eigenprojections()[1];
        let expected = CMat::from_row_slice(2, 2, &[c(0.5), c(0.25), c(1.0), c(0.5)]);
        assert!(op_norm(&(p_plus - expected)) < 1e-13);
    }

    #[test]
    fn positive_part_of_swap() {
        let sys = gram_eigendecompose(&swap(), &GramSpace::identity(2)).unwrap();
        let p = sys.apply_real(|x| if x > 0.0 { 1.0 } else { 0.0 }).unwrap();
        assert!(op_norm(&(p - CMat::from_element(2, 2, c(0.5)))) < 1e-14);
    }

    #[test]
    fn asymmetric_operator_is_rejected() {
        let mut op = swap();
        op[(0, 1)] += c(1e-3);
        let err = gram_eigendecompose(&op, &GramSpace::identity(2)).unwrap_err();
        assert!(matches!(err, Error::NotSelfAdjoint { .. }));
    }

    #[test]
    fn kernel_is_rejected() {
        let op = real_diag(&[0.0, 1.0]);
        let err = gram_eigendecompose(&op, &GramSpace::identity(2)).unwrap_err();
        assert!(matches!(err, Error::KernelViolation { .. }));
        assert_eq!(gram_eigenvalues(&op, &GramSpace::identity(2)).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn indefinite_gram_is_rejected() {
        assert_eq!(GramSpace::new(real_diag(&[1.0, -1.0])).unwrap_err(), Error::DegenerateGram);
    }

    #[test]
    fn singular_function_is_reported() {
        let sys = gram_eigendecompose(&real_diag(&[-1.0, 2.0]), &GramSpace::identity(2)).unwrap();
        let err = sys.apply_real(|x| 1.0 / (x + 1.0)).unwrap_err();
        assert_eq!(err, Error::FunctionSingularAtEigenvalue { eigenvalue: -1.0 });
    }

    #[test]
    fn thermal_factor_on_scalar() {
        let sys = gram_eigendecompose(&real_diag(&[1.0]), &GramSpace::identity(1)).unwrap();
        let v = sys.apply_real(|x| 1.0 / (1.0 - (-x).exp())).unwrap();
        assert!((v[(0, 0)].re - 1.581_976_706_869_326_4).abs() < 1e-14);
    }

    #[test]
    fn gram_adjoint_matches_definition() {
        let g = real_diag(&[2.0, 3.0]);
        let space = GramSpace::new(g.clone()).unwrap();
        let a = CMat::from_row_slice(2, 2, &[c(1.0), C64::new(0.0, 2.0), c(3.0), c(4.0)]);
        let adj = space.adjoint(&a);
        let direct = g.clone().try_inverse().unwrap() * a.adjoint() * g;
        assert!(op_norm(&(adj - direct)) < 1e-14);
    }
}
