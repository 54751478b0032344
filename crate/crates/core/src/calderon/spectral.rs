//! Calderón projectors from the functional calculus of the generator, and
//! their transport between the abstract, tilde and lapse frames.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{c, direct_sum, real_diag, CMat, GramSpace, SpectralSystem};
use crate::model::FirstOrderSystem;
use crate::thermal::{bose_minus, bose_plus, half_csch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Abstract,
    Tilde,
    Lapse,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Frame::Abstract => "abstract",
            Frame::Tilde => "tilde",
            Frame::Lapse => "lapse",
        };
        f.write_str(name)
    }
}

/// Complementary projections `(c⁺, c⁻)` on one slice copy (`beta = None`) or
/// on two copies ordered `(s = 0, s = β/2)`.
#[derive(Debug, Clone)]
pub struct CalderonPair {
    plus: CMat,
    minus: CMat,
    frame: Frame,
    beta: Option<f64>,
    gram: CMat,
}

impl CalderonPair {
    /// `gram` is the Hermitian form in which defects are measured.
    pub fn new(plus: CMat, minus: CMat, frame: Frame, beta: Option<f64>, gram: CMat) -> Result<Self> {
        let n = gram.nrows();
        for m in [&plus, &minus] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
            }
        }
        Ok(Self { plus, minus, frame, beta, gram })
    }

    pub fn plus(&self) -> &CMat {
        &self.plus
    }

    pub fn minus(&self) -> &CMat {
        &self.minus
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    fn norm(&self, m: &CMat) -> f64 {
        match GramSpace::new(self.gram.clone()) {
            Ok(space) => space.op_norm(m),
            Err(_) => crate::linalg::op_norm(m),
        }
    }

    /// `max(‖c⁺² − c⁺‖, ‖c⁻² − c⁻‖)` in the gram operator norm.
    pub fn idempotency_defect(&self) -> f64 {
        let p = self.norm(&(&self.plus * &self.plus - &self.plus));
        let m = self.norm(&(&self.minus * &self.minus - &self.minus));
        p.max(m)
    }

    /// `‖c⁺ + c⁻ − 1‖` in the gram operator norm.
    pub fn complementarity_defect(&self) -> f64 {
        let n = self.dim();
        self.norm(&(&self.plus + &self.minus - CMat::identity(n, n)))
    }

    /// `(M c⁺ M^{-1}, M c⁻ M^{-1})` with the gram moved along.
    fn conjugate(&self, m: &CMat, m_inv: &CMat, frame: Frame) -> Self {
        Self {
            plus: m * &self.plus * m_inv,
            minus: m * &self.minus * m_inv,
            frame,
            beta: self.beta,
            gram: m_inv.adjoint() * &self.gram * m_inv,
        }
    }
}

/// `C_∞^± = 1_{ℝ±}(b)`.
pub fn calderon_vacuum(sys: &SpectralSystem) -> Result<CalderonPair> {
    let plus = sys.apply_real(|l| if l > 0.0 { 1.0 } else { 0.0 })?;
    let minus = sys.apply_real(|l| if l < 0.0 { 1.0 } else { 0.0 })?;
    CalderonPair::new(plus, minus, Frame::Abstract, None, sys.space().gram().clone())
}

/// `C_β^± ` on two copies:
/// `C_β^+ = [[(1−e^{−βb})^{-1}, (1−e^{βb})^{-1}e^{βb/2}], [(1−e^{−βb})^{-1}e^{−βb/2}, (1−e^{βb})^{-1}]]`
/// and `C_β^− = 1 − C_β^+`, each block built from branch-stable scalars.
pub fn calderon_thermal(sys: &SpectralSystem, beta: f64) -> Result<CalderonPair> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::OutOfWindow { s: 0.0, beta });
    }
    let overflow = |e: Error| match e {
        Error::FunctionSingularAtEigenvalue { .. } => Error::Overflow,
        other => other,
    };
    let bp = sys.apply_real(|l| bose_plus(beta * l)).map_err(overflow)?;
    let bm = sys.apply_real(|l| bose_minus(beta * l)).map_err(overflow)?;
    let hc = sys.apply_real(|l| half_csch(beta * l)).map_err(overflow)?;
    let plus = crate::linalg::block2(&bp, &(&hc * c(-1.0)), &hc, &bm);
    let minus = crate::linalg::block2(&bm, &hc, &(&hc * c(-1.0)), &bp);
    let g = sys.space().gram();
    CalderonPair::new(plus, minus, Frame::Abstract, Some(beta), direct_sum(g, g))
}

/// Abstract to tilde frame. Thermal pairs are conjugated by `1 ⊕ T` with
/// `T = diag(1, −1)` on the `s = β/2` copy; vacuum pairs are unchanged.
pub fn to_tilde(cp: &CalderonPair) -> Result<CalderonPair> {
    if cp.frame != Frame::Abstract {
        return Err(Error::FrameMismatch { expected: Frame::Abstract.to_string(), found: cp.frame.to_string() });
    }
    match cp.beta {
        None => {
            let mut out = cp.clone();
            out.frame = Frame::Tilde;
            Ok(out)
        }
        Some(_) => {
            if cp.dim() % 4 != 0 {
                return Err(Error::DimensionMismatch { expected: 4 * (cp.dim() / 4 + 1), found: cp.dim() });
            }
            let n = cp.dim() / 4;
            let mut d = vec![1.0; 3 * n];
            d.extend(std::iter::repeat(-1.0).take(n));
            let m = real_diag(&d);
            Ok(cp.conjugate(&m, &m, Frame::Tilde))
        }
    }
}

/// Tilde to lapse frame: conjugation by `Z = diag(N, 1)` on each copy.
pub fn to_lapse(cp: &CalderonPair, sys: &FirstOrderSystem) -> Result<CalderonPair> {
    if cp.frame != Frame::Tilde {
        return Err(Error::FrameMismatch { expected: Frame::Tilde.to_string(), found: cp.frame.to_string() });
    }
    let (z, z_inv) = (sys.z_map(), sys.z_inverse());
    let unit = z.nrows();
    let copies = cp.dim() / unit;
    let (m, m_inv) = match copies {
        1 => (z, z_inv),
        2 => (direct_sum(&z, &z), direct_sum(&z_inv, &z_inv)),
        _ => return Err(Error::DimensionMismatch { expected: unit, found: cp.dim() }),
    };
    if cp.dim() != copies * unit {
        return Err(Error::DimensionMismatch { expected: copies * unit, found: cp.dim() });
    }
    Ok(cp.conjugate(&m, &m_inv, Frame::Lapse))
}

/// `c_∞^±` of the system in the lapse frame.
pub fn lapse_vacuum(sys: &FirstOrderSystem) -> Result<CalderonPair> {
    to_lapse(&to_tilde(&calderon_vacuum(sys.spectral())?)?, sys)
}

/// `c_β^±` of the system in the lapse frame.
pub fn lapse_thermal(sys: &FirstOrderSystem, beta: f64) -> Result<CalderonPair> {
    to_lapse(&to_tilde(&calderon_thermal(sys.spectral(), beta)?)?, sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gram_eigendecompose, op_norm};

    fn swap_system() -> SpectralSystem {
        let b = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        gram_eigendecompose(&b, &GramSpace::identity(2)).unwrap()
    }

    #[test]
    fn vacuum_projector_of_swap() {
        let cp = calderon_vacuum(&swap_system()).unwrap();
        assert!(op_norm(&(cp.plus() - CMat::from_element(2, 2, c(0.5)))) < 1e-15);
        assert!(cp.idempotency_defect() < 1e-15 && cp.complementarity_defect() < 1e-15);
    }

    #[test]
    fn scalar_thermal_projector() {
        let sys = gram_eigendecompose(&real_diag(&[1.0]), &GramSpace::identity(1)).unwrap();
        let cp = calderon_thermal(&sys, 1.0).unwrap();
        let p = cp.plus();
        let expected = [1.581_976_706_869_326_4, -0.959_517_375_667_471_86, 0.959_517_375_667_471_86, -0.581_976_706_869_326_4];
        for (k, e) in expected.iter().enumerate() {
            assert!((p[(k / 2, k % 2)].re - e).abs() < 1e-15);
        }
        assert!(cp.idempotency_defect() < 1e-14);
        // a scalar b carries no Cauchy-data split for T to act on
        assert!(matches!(to_tilde(&cp), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn tilde_conjugation_flips_second_copy_momenta() {
        let sys = FirstOrderSystem::from_parts(real_diag(&[4.0]), CMat::zeros(1, 1), vec![1.0], vec![1.0]).unwrap();
        let cp = calderon_thermal(sys.spectral(), 1.0).unwrap();
        let tilde = to_tilde(&cp).unwrap();
        for r in 0..4 {
            for k in 0..4 {
                let sign = if (r == 3) != (k == 3) { -1.0 } else { 1.0 };
                assert_eq!(tilde.plus()[(r, k)], cp.plus()[(r, k)] * sign);
            }
        }
        assert!(tilde.idempotency_defect() < 1e-13);
        assert!(matches!(to_tilde(&tilde), Err(Error::FrameMismatch { .. })));
    }

    #[test]
    fn large_beta_decouples_the_copies() {
        let sys = swap_system();
        let cp = calderon_thermal(&sys, 60.0).unwrap();
        let vac = calderon_vacuum(&sys).unwrap();
        let expected = direct_sum(vac.plus(), vac.minus());
        assert!(op_norm(&(cp.plus() - expected)) < 1e-12);
    }
}
