//! Green kernels of `∂_s + b` on the line and on the circle of length `β`.

use crate::error::{Error, Result};
use crate::linalg::{CMat, SpectralSystem};
use crate::thermal::green_scalar;

/// `G_∞(s) = e^{−sb}(1_{s>0} 1_{ℝ⁺}(b) − 1_{s<0} 1_{ℝ⁻}(b))` and its
/// `β`-periodic counterpart `G_β`.
#[derive(Debug, Clone)]
pub struct GreenKernel {
    base: SpectralSystem,
    beta: f64,
}

impl GreenKernel {
    /// `beta = f64::INFINITY` gives the vacuum kernel.
    pub fn new(base: SpectralSystem, beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::OutOfWindow { s: 0.0, beta });
        }
        Ok(Self { base, beta })
    }

    pub fn base(&self) -> &SpectralSystem {
        &self.base
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Evaluates the kernel at `s`. The sign bit of `s` picks the branch, so
    /// `0.0` and `-0.0` give the two one-sided limits.
    pub fn eval(&self, s: f64) -> Result<CMat> {
        if self.beta.is_finite() && !(s.abs() <= self.beta) {
            return Err(Error::OutOfWindow { s, beta: self.beta });
        }
        let right = s.is_sign_positive();
        self.base.apply_real(|lambda| green_scalar(s, self.beta, lambda, right))
    }

    /// `G(0⁺) − G(0⁻)`, which is the identity.
    pub fn jump(&self) -> Result<CMat> {
        Ok(self.eval(0.0)? - self.eval(-0.0)?)
    }

    /// `‖(G(s+h) − G(s−h))/(2h) + bG(s)‖` in the gram operator norm.
    pub fn ode_residual(&self, s: f64, h: f64) -> Result<f64> {
        let dg = (self.eval(s + h)? - self.eval(s - h)?) / crate::linalg::c(2.0 * h);
        let r = dg + self.base.op() * self.eval(s)?;
        Ok(self.base.space().op_norm(&r))
    }
}

pub fn green_eval(kernel: &GreenKernel, s: f64) -> Result<CMat> {
    kernel.eval(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, gram_eigendecompose, op_norm, real_diag, GramSpace};

    fn scalar(b: f64) -> SpectralSystem {
        gram_eigendecompose(&real_diag(&[b]), &GramSpace::identity(1)).unwrap()
    }

    #[test]
    fn vacuum_kernel_keeps_positive_part() {
        let g = GreenKernel::new(scalar(1.0), f64::INFINITY).unwrap();
        assert!((g.eval(2.0).unwrap()[(0, 0)].re - 0.135_335_283_236_612_69).abs() < 1e-16);
        assert_eq!(g.eval(-2.0).unwrap()[(0, 0)], c(0.0));
    }

    #[test]
    fn thermal_endpoints_and_window() {
        let g = GreenKernel::new(scalar(1.0), 1.0).unwrap();
        let right = g.eval(0.5).unwrap()[(0, 0)];
        assert_eq!(right, g.eval(-0.5).unwrap()[(0, 0)]);
        assert!((right.re - 0.959_517_375_667_471_86).abs() < 1e-15);
        assert!(matches!(g.eval(1.5), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn jump_is_identity() {
        let b = real_diag(&[-2.0, 0.5, 3.0]);
        let g = GreenKernel::new(gram_eigendecompose(&b, &GramSpace::identity(3)).unwrap(), 0.7).unwrap();
        assert!(op_norm(&(g.jump().unwrap() - CMat::identity(3, 3))) < 1e-14);
    }
}
