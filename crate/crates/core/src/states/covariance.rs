//! Covariance pairs of gauge-invariant quasi-free states and their checks.

use crate::calderon::{lapse_thermal, lapse_vacuum, Frame};
use crate::error::{Error, Result};
use crate::linalg::{
    c, condition_number, direct_sum, hermitian_eigenvalues, inverse, op_norm, CMat, GramSpace,
};
use crate::model::FirstOrderSystem;
use crate::thermal::{bose_minus, bose_plus};

/// Charge above which `q` counts as singular in [`check_purity`].
pub const CHARGE_CONDITION_LIMIT: f64 = 1e12;

/// `(λ⁺, λ⁻)` as sesquilinear forms `x̄₁·λ x₂` on Cauchy data, with the
/// charge they answer to.
#[derive(Debug, Clone)]
pub struct CovariancePair {
    plus: CMat,
    minus: CMat,
    charge: CMat,
    frame: Frame,
}

impl CovariancePair {
    pub fn new(plus: CMat, minus: CMat, charge: CMat, frame: Frame) -> Result<Self> {
        let n = charge.nrows();
        for m in [&plus, &minus, &charge] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
            }
        }
        Ok(Self { plus, minus, charge, frame })
    }

    /// `λ± = ±q c±`.
    pub fn from_projectors(charge: &CMat, plus: &CMat, minus: &CMat, frame: Frame) -> Result<Self> {
        Self::new(charge * plus, -(charge * minus), charge.clone(), frame)
    }

    pub fn plus(&self) -> &CMat {
        &self.plus
    }

    pub fn minus(&self) -> &CMat {
        &self.minus
    }

    pub fn charge(&self) -> &CMat {
        &self.charge
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn dim(&self) -> usize {
        self.charge.nrows()
    }

    /// `(M^H λ⁺ M, M^H λ⁻ M)` with charge `M^H q M`.
    pub fn congruence(&self, m: &CMat) -> Self {
        let mh = m.adjoint();
        Self {
            plus: &mh * &self.plus * m,
            minus: &mh * &self.minus * m,
            charge: &mh * &self.charge * m,
            frame: self.frame,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateReport {
    pub min_eig_plus: f64,
    pub min_eig_minus: f64,
    pub norm_plus: f64,
    pub norm_minus: f64,
    /// `‖λ⁺ − λ⁻ − q‖`.
    pub ccr_defect: f64,
    pub hermitian_defect_plus: f64,
    pub hermitian_defect_minus: f64,
}

impl StateReport {
    /// Positivity relative to `‖λ±‖`, CCR and Hermiticity defects absolute.
    pub fn passes(&self, tol: f64) -> bool {
        self.min_eig_plus >= -tol * self.norm_plus
            && self.min_eig_minus >= -tol * self.norm_minus
            && self.ccr_defect <= tol
            && self.hermitian_defect_plus <= tol * self.norm_plus.max(1.0)
            && self.hermitian_defect_minus <= tol * self.norm_minus.max(1.0)
    }

    /// The positivity violation relative to the norm, `0` when positive.
    pub fn positivity_defect(&self) -> f64 {
        let p = (-self.min_eig_plus / self.norm_plus.max(f64::MIN_POSITIVE)).max(0.0);
        let m = (-self.min_eig_minus / self.norm_minus.max(f64::MIN_POSITIVE)).max(0.0);
        p.max(m)
    }
}

pub fn validate_state(pair: &CovariancePair) -> StateReport {
    let herm = |m: &CMat| (m - m.adjoint()).norm();
    StateReport {
        min_eig_plus: hermitian_eigenvalues(&pair.plus)[0],
        min_eig_minus: hermitian_eigenvalues(&pair.minus)[0],
        norm_plus: op_norm(&pair.plus),
        norm_minus: op_norm(&pair.minus),
        ccr_defect: op_norm(&(&pair.plus - &pair.minus - &pair.charge)),
        hermitian_defect_plus: herm(&pair.plus),
        hermitian_defect_minus: herm(&pair.minus),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurityReport {
    /// `max ‖c±² − c±‖` with `c± = ±q^{-1}λ±`.
    pub idempotency_defect: f64,
    /// `‖c⁺ + c⁻ − 1‖`.
    pub complementarity_defect: f64,
    /// Condition number of the test Gram `λ⁺ + λ⁻`; infinite when it is not
    /// positive definite and the Euclidean norm was used instead.
    pub gram_condition: f64,
}

impl PurityReport {
    pub fn defect(&self) -> f64 {
        self.idempotency_defect.max(self.complementarity_defect)
    }
}

/// The projector criterion for purity, measured in the `λ⁺ + λ⁻` norm.
pub fn check_purity(pair: &CovariancePair) -> Result<PurityReport> {
    let condition = condition_number(&pair.charge);
    if !(condition < CHARGE_CONDITION_LIMIT) {
        return Err(Error::ChargeSingular);
    }
    let q_inv = inverse(&pair.charge).ok_or(Error::ChargeSingular)?;
    let cp = &q_inv * &pair.plus;
    let cm = -(&q_inv * &pair.minus);
    let gram = &pair.plus + &pair.minus;
    let (norm, gram_condition): (Box<dyn Fn(&CMat) -> f64>, f64) = match GramSpace::new(gram) {
        Ok(space) => {
            let cond = space.condition();
            (Box::new(move |m: &CMat| space.op_norm(m)), cond)
        }
        Err(_) => (Box::new(op_norm), f64::INFINITY),
    };
    let n = pair.dim();
    let idem = norm(&(&cp * &cp - &cp)).max(norm(&(&cm * &cm - &cm)));
    let comp = norm(&(&cp + &cm - CMat::identity(n, n)));
    Ok(PurityReport { idempotency_defect: idem, complementarity_defect: comp, gram_condition })
}

/// `λ_vac^± = ±q c_∞^±` in the lapse frame.
pub fn vacuum_covariances(sys: &FirstOrderSystem) -> Result<CovariancePair> {
    let cp = lapse_vacuum(sys)?;
    CovariancePair::from_projectors(&sys.lapse_charge(), cp.plus(), cp.minus(), Frame::Lapse)
}

/// `λ_β^+ = q(1 − e^{−βH})^{-1}`, `λ_β^− = q(e^{βH} − 1)^{-1}` in the lapse
/// frame, `H = Z H̃ Z^{-1}`. An infinite `beta` gives the vacuum.
pub fn kms_covariances(sys: &FirstOrderSystem, beta: f64) -> Result<CovariancePair> {
    if beta.is_infinite() && beta > 0.0 {
        return vacuum_covariances(sys);
    }
    if !(beta > 0.0) {
        return Err(Error::OutOfWindow { s: 0.0, beta });
    }
    let (z, zi) = (sys.z_map(), sys.z_inverse());
    let plus = sys.spectral().apply_real(|l| bose_plus(beta * l)).map_err(|_| Error::Overflow)?;
    let minus = sys.spectral().apply_real(|l| bose_minus(beta * l)).map_err(|_| Error::Overflow)?;
    CovariancePair::from_projectors(
        &sys.lapse_charge(),
        &(&z * plus * &zi),
        &(&z * minus * &zi),
        Frame::Lapse,
    )
}

/// `λ_d^± = ±Q (1⊕T) c_β^± (1⊕T)` on two lapse-frame copies ordered
/// `(s = 0, s = β/2)`, with `Q = q ⊕ −q`.
pub fn double_kms_covariances(sys: &FirstOrderSystem, beta: f64) -> Result<CovariancePair> {
    let cp = lapse_thermal(sys, beta)?;
    let n = sys.n();
    let mut d = vec![c(1.0); 3 * n];
    d.extend(std::iter::repeat(c(-1.0)).take(n));
    let t = CMat::from_diagonal(&crate::linalg::CVec::from_vec(d));
    let q = sys.lapse_charge();
    let charge = direct_sum(&q, &(-&q));
    CovariancePair::from_projectors(&charge, &(&t * cp.plus() * &t), &(&t * cp.minus() * &t), Frame::Lapse)
}

/// `‖q^{-1}λ⁻ − e^{−βH} q^{-1}λ⁺‖ / ‖q^{-1}λ⁺‖` for a single-copy lapse-frame
/// pair.
pub fn kms_detailed_balance(pair: &CovariancePair, sys: &FirstOrderSystem, beta: f64) -> Result<f64> {
    if pair.dim() != 2 * sys.n() {
        return Err(Error::DimensionMismatch { expected: 2 * sys.n(), found: pair.dim() });
    }
    let q_inv = inverse(&pair.charge).ok_or(Error::ChargeSingular)?;
    let boltzmann = sys.spectral().apply_real(|l| (-beta * l).exp()).map_err(|_| Error::Overflow)?;
    let boltzmann = sys.z_map() * boltzmann * sys.z_inverse();
    let rp = &q_inv * &pair.plus;
    let rm = &q_inv * &pair.minus;
    Ok(op_norm(&(rm - boltzmann * &rp)) / op_norm(&rp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_diag;

    fn single_mode(omega: f64) -> FirstOrderSystem {
        FirstOrderSystem::from_parts(real_diag(&[omega * omega]), CMat::zeros(1, 1), vec![1.0], vec![1.0])
            .unwrap()
    }

    #[test]
    fn vacuum_of_single_mode() {
        let pair = vacuum_covariances(&single_mode(2.0)).unwrap();
        let expected = CMat::from_row_slice(2, 2, &[c(1.0), c(0.5), c(0.5), c(0.25)]);
        assert!(op_norm(&(pair.plus() - expected)) < 1e-14);
        let r = validate_state(&pair);
        assert!(r.passes(1e-12), "{r:?}");
        assert!(check_purity(&pair).unwrap().defect() < 1e-12);
    }

    #[test]
    fn kms_of_single_mode() {
        let sys = single_mode(1.0);
        let pair = kms_covariances(&sys, 1.0).unwrap();
        let d = 1.081_976_706_869_326_4;
        let expected = CMat::from_row_slice(2, 2, &[c(d), c(0.5), c(0.5), c(d)]);
        assert!(op_norm(&(pair.plus() - expected)) < 1e-14);
        assert!(kms_detailed_balance(&pair, &sys, 1.0).unwrap() < 1e-14);
        let purity = check_purity(&pair).unwrap();
        assert!((purity.idempotency_defect - 0.920_673_594_207_792_32).abs() < 1e-12);
    }

    #[test]
    fn double_kms_is_pure_and_restricts_to_kms() {
        let sys = single_mode(1.3);
        let d = double_kms_covariances(&sys, 0.8).unwrap();
        assert!(validate_state(&d).passes(1e-12));
        assert!(check_purity(&d).unwrap().defect() < 1e-12);
        let k = kms_covariances(&sys, 0.8).unwrap();
        let block = d.plus().view((0, 0), (2, 2)).into_owned();
        assert!(op_norm(&(block - k.plus())) < 1e-13);
    }

    #[test]
    fn perturbed_pair_reports_its_ccr_defect() {
        let pair = vacuum_covariances(&single_mode(1.0)).unwrap();
        let bumped = CovariancePair::new(
            pair.plus() + CMat::identity(2, 2) * c(1e-3),
            pair.minus().clone(),
            pair.charge().clone(),
            Frame::Lapse,
        )
        .unwrap();
        assert!((validate_state(&bumped).ccr_defect - 1e-3).abs() < 1e-14);
        let q = pair.charge().clone();
        let naive = CovariancePair::new(q.clone(), CMat::zeros(2, 2), q, Frame::Lapse).unwrap();
        assert!(!validate_state(&naive).passes(1e-10));
    }
}
