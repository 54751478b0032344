//! The lapse-reduced first-order system
//! `H̃ = [[−i w̃, 1], [h̃₀, i w̃*]]` on Cauchy data, with its energy and charge
//! forms, quadratic pencil and resolvent.

use super::spatial::SpatialOperators;
use crate::error::{Error, Result};
use crate::linalg::{
    block, block2, c, condition_number, direct_sum, gram_eigendecompose, inverse, real_diag, CMat,
    CVec, GramSpace, SpectralSystem, C64, I,
};

/// Largest pencil condition number accepted by [`FirstOrderSystem::resolvent`].
pub const PENCIL_CONDITION_LIMIT: f64 = 1e12;

/// Cauchy data `f = (f₀, f₁)` over the slice points.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    pub f0: CVec,
    pub f1: CVec,
}

impl CauchyData {
    pub fn new(f0: CVec, f1: CVec) -> Result<Self> {
        if f0.len() != f1.len() {
            return Err(Error::DimensionMismatch { expected: f0.len(), found: f1.len() });
        }
        Ok(Self { f0, f1 })
    }

    pub fn from_vector(v: &CVec) -> Self {
        let n = v.len() / 2;
        Self { f0: v.rows(0, n).into_owned(), f1: v.rows(n, n).into_owned() }
    }

    pub fn to_vector(&self) -> CVec {
        let n = self.f0.len();
        CVec::from_fn(2 * n, |i, _| if i < n { self.f0[i] } else { self.f1[i - n] })
    }
}

/// Lattice Klein–Gordon data reduced to the generator `H̃`.
#[derive(Debug, Clone)]
pub struct FirstOrderSystem {
    lapse: Vec<f64>,
    gram_h: Vec<f64>,
    gram_ht: Vec<f64>,
    h0: CMat,
    w: CMat,
    w_star: CMat,
    h: CMat,
    k: CMat,
    generator: CMat,
    charge: CMat,
    spectral: SpectralSystem,
}

/// `h̃₀ = N h₀ N`, `w̃ = N^{-1} w N`, then [`FirstOrderSystem::from_parts`].
pub fn lapse_reduce(ops: &SpatialOperators) -> Result<FirstOrderSystem> {
    let n = real_diag(ops.lapse());
    let n_inv = real_diag(&ops.lapse().iter().map(|x| 1.0 / x).collect::<Vec<_>>());
    let h0 = &n * ops.h0() * &n;
    let w = &n_inv * ops.w_op() * &n;
    FirstOrderSystem::from_parts(h0, w, ops.gram_htilde().to_vec(), ops.lapse().to_vec())
}

impl FirstOrderSystem {
    /// Builds the system from lapse-reduced operators, the diagonal of the
    /// `NρΔy` Gram and the lapse.
    pub fn from_parts(h0: CMat, w: CMat, gram_ht: Vec<f64>, lapse: Vec<f64>) -> Result<Self> {
        let n = h0.nrows();
        for len in [w.nrows(), gram_ht.len(), lapse.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        if let Some((index, &value)) = lapse.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
            return Err(Error::DegenerateLapse { index, value });
        }
        let space = GramSpace::from_diagonal(&gram_ht)?;
        let w_star = space.adjoint(&w);
        let h = &h0 - &w_star * &w;
        let k = (&w - &w_star) * (C64::new(0.0, -0.5));
        let id = CMat::identity(n, n);
        let generator = block2(&(&w * -I), &id, &h0, &(&w_star * I));
        let g = real_diag(&gram_ht);
        let zero = CMat::zeros(n, n);
        let charge = block2(&zero, &g, &g, &zero);
        let energy = GramSpace::new(crate::linalg::hermitian_part(&(&charge * &generator)))?;
        let spectral = gram_eigendecompose(&generator, &energy)?;
        let gram_h = gram_ht.iter().zip(&lapse).map(|(g, n)| g / n).collect();
        Ok(Self { lapse, gram_h, gram_ht, h0, w, w_star, h, k, generator, charge, spectral })
    }

    /// Number of slice points; Cauchy data have twice this dimension.
    pub fn n(&self) -> usize {
        self.lapse.len()
    }

    pub fn lapse(&self) -> &[f64] {
        &self.lapse
    }

    pub fn gram_h(&self) -> &[f64] {
        &self.gram_h
    }

    pub fn gram_htilde(&self) -> &[f64] {
        &self.gram_ht
    }

    pub fn h0(&self) -> &CMat {
        &self.h0
    }

    pub fn w(&self) -> &CMat {
        &self.w
    }

    pub fn w_star(&self) -> &CMat {
        &self.w_star
    }

    /// `h̃ = h̃₀ − w̃* w̃`.
    pub fn h(&self) -> &CMat {
        &self.h
    }

    /// `k̃ = (2i)^{-1}(w̃ − w̃*)`.
    pub fn k(&self) -> &CMat {
        &self.k
    }

    pub fn generator(&self) -> &CMat {
        &self.generator
    }

    pub fn energy(&self) -> &GramSpace {
        self.spectral.space()
    }

    pub fn spectral(&self) -> &SpectralSystem {
        &self.spectral
    }

    /// `q̃ = [[0, G̃], [G̃, 0]]`.
    pub fn charge(&self) -> &CMat {
        &self.charge
    }

    /// Charge in the lapse frame, `q = [[0, G], [G, 0]]` with `G = ρΔy`.
    pub fn lapse_charge(&self) -> CMat {
        let g = real_diag(&self.gram_h);
        let zero = CMat::zeros(self.n(), self.n());
        block2(&zero, &g, &g, &zero)
    }

    /// `Z = diag(N, 1)`, which maps tilde-frame to lapse-frame data.
    pub fn z_map(&self) -> CMat {
        direct_sum(&real_diag(&self.lapse), &CMat::identity(self.n(), self.n()))
    }

    pub fn z_inverse(&self) -> CMat {
        let inv: Vec<f64> = self.lapse.iter().map(|x| 1.0 / x).collect();
        direct_sum(&real_diag(&inv), &CMat::identity(self.n(), self.n()))
    }

    /// Energy Gram transported to the lapse frame, `Z^{-H} Ẽ Z^{-1}`.
    pub fn lapse_energy(&self) -> Result<GramSpace> {
        let zi = self.z_inverse();
        GramSpace::new(zi.adjoint() * self.energy().gram() * zi)
    }

    pub fn energy_form(&self, f: &CauchyData, g: &CauchyData) -> C64 {
        self.energy().inner(&f.to_vector(), &g.to_vector())
    }

    pub fn charge_form(&self, f: &CauchyData, g: &CauchyData) -> C64 {
        (f.to_vector().adjoint() * &self.charge * g.to_vector())[(0, 0)]
    }

    /// `U = [[1, 0], [i w̃, 1]]` with `Ĥ = U^{-1} H̃ U`.
    pub fn hat_map(&self) -> CMat {
        let n = self.n();
        block2(&CMat::identity(n, n), &CMat::zeros(n, n), &(&self.w * I), &CMat::identity(n, n))
    }

    /// `Ĥ = [[0, 1], [h̃, 2k̃]]`.
    pub fn hat_generator(&self) -> CMat {
        let n = self.n();
        block2(&CMat::zeros(n, n), &CMat::identity(n, n), &self.h, &(&self.k * c(2.0)))
    }

    /// `Ê = diag(G̃ h̃, G̃)`.
    pub fn hat_energy_gram(&self) -> CMat {
        let g = real_diag(&self.gram_ht);
        direct_sum(&(&g * &self.h), &g)
    }

    /// Both factorizations `(iz + w̃*)(iz − w̃) + h̃₀` and `z(2k̃ − z) + h̃`.
    pub fn pencil_forms(&self, z: C64) -> (CMat, CMat) {
        let n = self.n();
        let id = CMat::identity(n, n);
        let iz = &id * (I * z);
        let first = (&iz + &self.w_star) * (&iz - &self.w) + &self.h0;
        let second = (&self.k * c(2.0) - &id * z) * z + &self.h;
        (first, second)
    }

    /// `p(z) = (iz + w̃*)(iz − w̃) + h̃₀`.
    pub fn quadratic_pencil(&self, z: C64) -> CMat {
        self.pencil_forms(z).0
    }

    /// `(H̃ − z)^{-1}` from `p(z)^{-1}[[z − 2k̃, 1], [h̃, z]]`, moved from the
    /// hat to the tilde frame.
    pub fn resolvent(&self, z: C64) -> Result<CMat> {
        let n = self.n();
        let p = self.quadratic_pencil(z);
        let condition = condition_number(&p);
        if !(condition < PENCIL_CONDITION_LIMIT) {
            return Err(Error::PencilSingular { condition });
        }
        let p_inv = inverse(&p).ok_or(Error::PencilSingular { condition })?;
        let id = CMat::identity(n, n);
        let hat = block2(
            &(&p_inv * (&id * z - &self.k * c(2.0))),
            &p_inv,
            &(&p_inv * &self.h),
            &(&p_inv * z),
        );
        let u = self.hat_map();
        let u_inv = block2(&id, &CMat::zeros(n, n), &(&self.w * -I), &id);
        Ok(u * hat * u_inv)
    }

    /// `e^{itH̃} f`.
    pub fn evolve(&self, f: &CauchyData, t: f64) -> Result<CauchyData> {
        if f.f0.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: f.f0.len() });
        }
        let u = self.spectral.apply_function(|l| C64::from_polar(1.0, t * l))?;
        Ok(CauchyData::from_vector(&(u * f.to_vector())))
    }

    /// Block `(row, col)` of a `2n × 2n` matrix.
    pub fn block_of(&self, m: &CMat, row: usize, col: usize) -> CMat {
        block(m, row, col, self.n())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm;

    fn single_mode(omega: f64) -> FirstOrderSystem {
        FirstOrderSystem::from_parts(
            real_diag(&[omega * omega]),
            CMat::zeros(1, 1),
            vec![1.0],
            vec![1.0],
        )
        .unwrap()
    }

    #[test]
    fn single_mode_generator_energy_and_spectrum() {
        let sys = single_mode(2.0);
        let h = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(4.0), c(0.0)]);
        assert!(op_norm(&(sys.generator() - h)) < 1e-15);
        assert!(op_norm(&(sys.energy().gram() - real_diag(&[4.0, 1.0]))) < 1e-15);
        let ev = sys.spectral().eigenvalues();
        assert!((ev[0] + 2.0).abs() < 1e-13 && (ev[1] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn pencil_special_values() {
        let sys = single_mode(2.0);
        assert!(op_norm(&(sys.quadratic_pencil(c(0.0)) - sys.h())) < 1e-15);
        assert!((sys.quadratic_pencil(I)[(0, 0)] - c(5.0)).norm() < 1e-14);
    }

    #[test]
    fn resolvent_of_single_mode() {
        let omega = 1.5;
        let sys = single_mode(omega);
        let r = sys.resolvent(I).unwrap();
        let w2 = omega * omega;
        let expected = CMat::from_row_slice(2, 2, &[I, c(1.0), c(w2), I]) / c(w2 + 1.0);
        assert!(op_norm(&(&r - expected)) < 1e-14);
        let r0 = sys.resolvent(c(0.0)).unwrap();
        let expected0 = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0 / w2), c(1.0), c(0.0)]);
        assert!(op_norm(&(r0 - expected0)) < 1e-14);
    }

    #[test]
    fn evolve_half_period_flips_sign() {
        let sys = single_mode(1.0);
        let f = CauchyData::new(CVec::from_vec(vec![c(1.0)]), CVec::from_vec(vec![c(0.0)])).unwrap();
        let g = sys.evolve(&f, std::f64::consts::PI).unwrap();
        assert!((g.f0[0] + c(1.0)).norm() < 1e-13 && g.f1[0].norm() < 1e-13);
        let same = sys.evolve(&f, 0.0).unwrap();
        assert!((same.f0[0] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_pencil_is_reported() {
        let sys = single_mode(1.0);
        assert!(matches!(sys.resolvent(c(1.0)), Err(Error::PencilSingular { .. })));
    }
}
