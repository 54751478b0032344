//! One-particle Araki–Woods vectors of the doubled thermal state, used as an
//! oracle for the double KMS covariances.
//!
//! Data `x = (y, y')` live on two copies of the energy space. In the
//! dynamical coordinates `α_k = |λ_k|^{-1/2} r_k^H E y` of the eigenbasis of
//! `b`, the vector `Ψ*(x)Ω ∈ Z ⊕ Z̄` has `Z` part
//! `(ρ+1)^{1/2}α + ρ^{1/2}α'` on positive modes and `Z̄` part
//! `ρ^{1/2}α + (ρ+1)^{1/2}α'` on negative modes, and `Ψ(x)Ω` is the complex
//! conjugate of the same construction with the roles of the modes swapped.

use crate::calderon::Frame;
use crate::error::{Error, Result};
use crate::linalg::{c, direct_sum, CMat, CVec, SpectralSystem, C64};
use crate::model::FirstOrderSystem;
use crate::thermal::occupation;

use super::covariance::CovariancePair;

#[derive(Debug, Clone)]
pub struct AWOracle {
    base: SpectralSystem,
    beta: f64,
    rho: Vec<f64>,
    creation: CMat,
    conj_annihilation: CMat,
}

impl AWOracle {
    pub fn new(base: &SpectralSystem, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::OutOfWindow { s: 0.0, beta });
        }
        let modes = base.mode_eigenvalues();
        let d = modes.len();
        let rho: Vec<f64> = modes.iter().map(|l| occupation(beta * l)).collect();
        if rho.iter().any(|r| !r.is_finite()) {
            return Err(Error::Overflow);
        }
        // dynamical coordinates
        let mut dyn_coords = base.coordinates().clone();
        for (k, mut row) in dyn_coords.row_iter_mut().enumerate() {
            row *= c(modes[k].abs().powf(-0.5));
        }
        let weighted = |weights: &dyn Fn(usize) -> f64| {
            let mut m = dyn_coords.clone();
            for (k, mut row) in m.row_iter_mut().enumerate() {
                row *= c(weights(k));
            }
            m
        };
        let pos = |k: usize| modes[k] > 0.0;
        let on = |mask: bool, v: f64| if mask { v } else { 0.0 };
        let creation = stack(
            &weighted(&|k| on(pos(k), (rho[k] + 1.0).sqrt())),
            &weighted(&|k| on(pos(k), rho[k].sqrt())),
            &weighted(&|k| on(!pos(k), rho[k].sqrt())),
            &weighted(&|k| on(!pos(k), (rho[k] + 1.0).sqrt())),
        );
        let conj_annihilation = stack(
            &weighted(&|k| on(!pos(k), (rho[k] + 1.0).sqrt())),
            &weighted(&|k| on(!pos(k), rho[k].sqrt())),
            &weighted(&|k| on(pos(k), rho[k].sqrt())),
            &weighted(&|k| on(pos(k), (rho[k] + 1.0).sqrt())),
        );
        debug_assert_eq!(creation.shape(), (2 * d, 2 * d));
        Ok(Self { base: base.clone(), beta, rho, creation, conj_annihilation })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn base(&self) -> &SpectralSystem {
        &self.base
    }

    /// `(e^{β|λ_k|} − 1)^{-1}` per mode.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    fn check(&self, x: &CVec) -> Result<()> {
        if x.len() != self.creation.ncols() {
            return Err(Error::BasisMismatch { expected: self.creation.ncols(), found: x.len() });
        }
        Ok(())
    }

    /// `Ψ*(x)Ω` in `Z ⊕ Z̄`, slot `k` for mode `k` of each summand.
    pub fn creation_vector(&self, x: &CVec) -> Result<CVec> {
        self.check(x)?;
        Ok(&self.creation * x)
    }

    /// `Ψ(x)Ω`, which is antilinear in `x`.
    pub fn annihilation_vector(&self, x: &CVec) -> Result<CVec> {
        self.check(x)?;
        Ok((&self.conj_annihilation * x).map(|v| v.conj()))
    }

    /// `⟨Ψ*(x₁)Ω, Ψ*(x₂)Ω⟩`, the `λ⁺` pairing.
    pub fn pairing_plus(&self, x1: &CVec, x2: &CVec) -> Result<C64> {
        Ok(self.creation_vector(x1)?.dotc(&self.creation_vector(x2)?))
    }

    /// `⟨Ψ(x₂)Ω, Ψ(x₁)Ω⟩`, the `λ⁻` pairing.
    pub fn pairing_minus(&self, x1: &CVec, x2: &CVec) -> Result<C64> {
        Ok(self.annihilation_vector(x2)?.dotc(&self.annihilation_vector(x1)?))
    }

    /// `⟨Ψ*(x₁)Ω, Ψ(x₂)Ω⟩`, which vanishes for a gauge-invariant state.
    pub fn gauge_pairing(&self, x1: &CVec, x2: &CVec) -> Result<C64> {
        Ok(self.creation_vector(x1)?.dotc(&self.annihilation_vector(x2)?))
    }

    /// Matrices of both pairings with charge `q ⊕ −q`, in the abstract frame.
    pub fn covariances(&self, charge: &CMat) -> Result<CovariancePair> {
        let plus = self.creation.adjoint() * &self.creation;
        let minus = self.conj_annihilation.adjoint() * &self.conj_annihilation;
        CovariancePair::new(plus, minus, direct_sum(charge, &(-charge)), Frame::Abstract)
    }
}

pub fn araki_woods_pairing(oracle: &AWOracle, x1: &CVec, x2: &CVec) -> Result<C64> {
    oracle.pairing_plus(x1, x2)
}

/// Oracle covariances in the layout of the double KMS pair: both copies in
/// the lapse frame, the second one conjugated by `J = 1 ⊕ (−1)` on its
/// components so that the oracle and the Calderón formula use the same
/// copy convention.
pub fn araki_woods_lapse(sys: &FirstOrderSystem, beta: f64) -> Result<CovariancePair> {
    let oracle = AWOracle::new(sys.spectral(), beta)?;
    let pair = oracle.covariances(sys.charge())?;
    let dim = 2 * sys.n();
    let mut flip = vec![c(1.0); dim];
    flip.extend(std::iter::repeat(c(-1.0)).take(dim));
    let j = CMat::from_diagonal(&CVec::from_vec(flip));
    let zi = sys.z_inverse();
    let moved = pair.congruence(&(j * direct_sum(&zi, &zi)));
    CovariancePair::new(moved.plus().clone(), moved.minus().clone(), moved.charge().clone(), Frame::Lapse)
}

fn stack(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let (r, k) = a.shape();
    let mut out = CMat::zeros(2 * r, 2 * k);
    out.view_mut((0, 0), (r, k)).copy_from(a);
    out.view_mut((0, k), (r, k)).copy_from(b);
    out.view_mut((r, 0), (r, k)).copy_from(c);
    out.view_mut((r, k), (r, k)).copy_from(d);
    out
}
