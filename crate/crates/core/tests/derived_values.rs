//! Closed-form values for small systems. Reference digits were computed
//! independently at 30 significant digits.

use hhi_forge_core::calderon::{calderon_thermal, calderon_vacuum, GreenKernel};
use hhi_forge_core::linalg::{c, gram_eigendecompose, max_abs, real_diag, CMat, CVec, GramSpace, I};
use hhi_forge_core::model::{assemble_spatial, validate_hypotheses, LatticeSlice, SliceGrid, ToyHorizon};
use hhi_forge_core::states::{check_purity, kms_covariances, AWOracle};
use hhi_forge_core::{CauchyData, FirstOrderSystem};

const BOSE_ONE: f64 = 1.581_976_706_869_326_4;
const HALF_CSCH_ONE: f64 = 0.959_517_375_667_471_86;
const RHO_ONE: f64 = 0.581_976_706_869_326_4;
const IMPURITY_ONE: f64 = 0.920_673_594_207_792_3;

fn oscillator(omega: f64) -> FirstOrderSystem {
    FirstOrderSystem::from_parts(real_diag(&[omega * omega]), CMat::zeros(1, 1), vec![1.0], vec![1.0]).unwrap()
}

fn scalar_b(b: f64) -> hhi_forge_core::SpectralSystem {
    gram_eigendecompose(&real_diag(&[b]), &GramSpace::identity(1)).unwrap()
}

#[test]
fn swap_matrix_positive_projection() {
    let op = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let sys = gram_eigendecompose(&op, &GramSpace::identity(2)).unwrap();
    let plus = calderon_vacuum(&sys).unwrap().plus().clone();
    assert!(max_abs(&(plus - CMat::from_element(2, 2, c(0.5)))) < 1e-15);
}

#[test]
fn oscillator_positive_projection_in_energy_gram() {
    let sys = oscillator(2.0);
    assert_eq!(sys.energy().gram(), &real_diag(&[4.0, 1.0]));
    let ev = sys.spectral().eigenvalues();
    assert!((ev[0] + 2.0).abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
    let plus = calderon_vacuum(sys.spectral()).unwrap().plus().clone();
    let expected = CMat::from_row_slice(2, 2, &[c(0.5), c(0.25), c(1.0), c(0.5)]);
    assert!(max_abs(&(plus - expected)) < 1e-14);
}

#[test]
fn scalar_thermal_projector() {
    let pair = calderon_thermal(&scalar_b(1.0), 1.0).unwrap();
    let p = pair.plus();
    let expected = [BOSE_ONE, -HALF_CSCH_ONE, HALF_CSCH_ONE, -RHO_ONE];
    for (k, value) in expected.iter().enumerate() {
        assert!((p[(k / 2, k % 2)].re - value).abs() < 1e-15, "entry {k}");
    }
    assert!((p.trace() - c(1.0)).norm() < 1e-15);
    assert!(p.determinant().norm() < 1e-15);
}

#[test]
fn scalar_green_kernel() {
    let vacuum = GreenKernel::new(scalar_b(1.0), f64::INFINITY).unwrap();
    assert!((vacuum.eval(2.0).unwrap()[(0, 0)].re - 0.135_335_283_236_612_69).abs() < 1e-16);
    let thermal = GreenKernel::new(scalar_b(1.0), 1.0).unwrap();
    let right = thermal.eval(0.5).unwrap()[(0, 0)];
    assert_eq!(right, thermal.eval(-0.5).unwrap()[(0, 0)]);
    assert!((right.re - HALF_CSCH_ONE).abs() < 1e-15);
}

#[test]
fn single_mode_kms_covariance_and_impurity() {
    let sys = oscillator(1.0);
    let pair = kms_covariances(&sys, 1.0).unwrap();
    let half_coth = 1.081_976_706_869_326_4;
    let expected = CMat::from_row_slice(2, 2, &[c(half_coth), c(0.5), c(0.5), c(half_coth)]);
    assert!(max_abs(&(pair.plus() - &expected)) < 1e-14);
    assert!(max_abs(&(pair.plus() - pair.minus() - pair.charge())) < 1e-15);
    assert!((check_purity(&pair).unwrap().idempotency_defect - IMPURITY_ONE).abs() < 1e-12);
}

#[test]
fn kms_covariance_of_a_stiffer_mode() {
    // λ⁺ = [[ω coth(βω/2)/2, 1/2], [1/2, coth(βω/2)/(2ω)]]
    let pair = kms_covariances(&oscillator(1.3), 0.8).unwrap();
    let p = pair.plus();
    assert!((p[(0, 0)].re - 1.360_686_588_742_909_7).abs() < 1e-14);
    assert!((p[(1, 1)].re - 0.805_139_993_338_999_8).abs() < 1e-14);
    assert!((p[(0, 1)] - c(0.5)).norm() < 1e-14);
}

#[test]
fn hawking_temperature_unit_mode() {
    let pair = kms_covariances(&oscillator(1.0), 2.0 * std::f64::consts::PI).unwrap();
    assert!((pair.plus()[(0, 0)].re - 0.501_870_936_598_660_6).abs() < 1e-14);
}

#[test]
fn araki_woods_scalar_pairings() {
    let aw = AWOracle::new(&scalar_b(1.0), 1.0).unwrap();
    assert!((aw.rho()[0] - RHO_ONE).abs() < 1e-15);
    let y = CVec::from_vec(vec![c(1.0), c(0.0)]);
    let y_prime = CVec::from_vec(vec![c(0.0), c(1.0)]);
    assert!((aw.pairing_plus(&y, &y).unwrap().re - BOSE_ONE).abs() < 1e-14);
    assert!((aw.pairing_plus(&y, &y_prime).unwrap().re - HALF_CSCH_ONE).abs() < 1e-14);
}

#[test]
fn resolvent_at_i_without_shift() {
    let omega = 1.5_f64;
    let sys = oscillator(omega);
    let r = sys.resolvent(I).unwrap();
    let w2 = omega * omega;
    let expected = CMat::from_row_slice(2, 2, &[I, c(1.0), c(w2), I]) / c(w2 + 1.0);
    assert!(max_abs(&(r - expected)) < 1e-14);
}

#[test]
fn evolution_of_a_single_mode() {
    // e^{itH̃}(1, 0) = (cos ωt, iω sin ωt)
    let sys = oscillator(1.5);
    let f = CauchyData::new(CVec::from_vec(vec![c(1.0)]), CVec::from_vec(vec![c(0.0)])).unwrap();
    let g = sys.evolve(&f, 1.7).unwrap();
    assert!((g.f0[0] - c(-0.830_053_535_235_222_2)).norm() < 1e-13);
    assert!((g.f1[0] - I * 0.836_525_576_087_125_3).norm() < 1e-13);
}

#[test]
fn toy_horizon_shift_threshold() {
    // pointwise (1−δ)κ²y² ≥ ε²y⁶ up to the last node y = (n − ½)L/(n + ½)
    let (delta, n) = (0.5, 16);
    let report = |epsilon: f64| {
        let slice =
            LatticeSlice::sample(SliceGrid::staggered(1.0, n), &ToyHorizon::new(1.0, epsilon, 1.0), 1.0).unwrap();
        validate_hypotheses(&assemble_spatial(&slice).unwrap(), delta).unwrap()
    };
    let y_last = (n as f64 - 0.5) / (n as f64 + 0.5);
    let threshold = (1.0 - delta).sqrt() / (y_last * y_last);
    assert!(report(0.5).pointwise_margin >= 0.0);
    assert!(report(0.98 * threshold).pointwise_margin >= 0.0);
    assert!(report(1.02 * threshold).pointwise_margin < 0.0);
    assert_eq!(report(0.0).shift_ratio, 0.0);
}
