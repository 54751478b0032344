use std::f64::consts::PI;

use hhi_forge_core::calderon::lapse_thermal;
use hhi_forge_core::euclid::{
    assemble_cylinder, divergence_identity_check, extend_to_disk, sample_periodic, sectorial_ratio, MetricSample,
};
use hhi_forge_core::linalg::{c, max_abs, op_norm, CMat, CVec, GramSpace};
use hhi_forge_core::model::{LatticeSlice, SliceGrid, ToyHorizon};
use hhi_forge_core::random::random_system;
use hhi_forge_core::states::{
    check_purity, double_kms_covariances, kms_covariances, kms_detailed_balance, to_full_slice, validate_state,
    vacuum_covariances, wedge_double, WedgeReflection,
};
use hhi_forge_core::thermal::{bose_minus, bose_plus, half_csch};
use hhi_forge_core::{CauchyData, FirstOrderSystem, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn system(seed: u64, n: usize) -> FirstOrderSystem {
    random_system(&mut ChaCha8Rng::seed_from_u64(seed), n, true).unwrap()
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn lambda_max(sys: &FirstOrderSystem) -> f64 {
    sys.spectral().mode_eigenvalues().iter().fold(0.0_f64, |m, l| m.max(l.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn thermal_projectors_are_complementary(seed in any::<u64>(), n in 1usize..12, beta in 0.2f64..7.0) {
        let pair = lapse_thermal(&system(seed, n), beta).unwrap();
        prop_assert!(pair.idempotency_defect() <= 1e-10);
        prop_assert!(pair.complementarity_defect() <= 1e-10);
    }

    #[test]
    fn kms_family_satisfies_the_state_axioms(seed in any::<u64>(), n in 1usize..8, beta in 0.3f64..7.0) {
        let sys = system(seed, n);
        for pair in [vacuum_covariances(&sys).unwrap(), kms_covariances(&sys, beta).unwrap()] {
            let r = validate_state(&pair);
            prop_assert!(r.passes(1e-10), "{:?}", r);
        }
        let double = double_kms_covariances(&sys, beta).unwrap();
        prop_assert!(validate_state(&double).passes(1e-10));
        prop_assert!(check_purity(&double).unwrap().defect() <= 1e-10);
        let wedge = to_full_slice(&wedge_double(&double, &WedgeReflection::unchecked(n)).unwrap()).unwrap();
        prop_assert!(validate_state(&wedge).passes(1e-10));
        prop_assert!(check_purity(&wedge).unwrap().defect() <= 1e-10);
    }

    #[test]
    fn double_kms_restricts_to_kms(seed in any::<u64>(), n in 1usize..8, beta in 0.3f64..5.0) {
        let sys = system(seed, n);
        let d = double_kms_covariances(&sys, beta).unwrap();
        let k = kms_covariances(&sys, beta).unwrap();
        let block = d.plus().view((0, 0), (2 * n, 2 * n)).into_owned();
        prop_assert!(max_abs(&(block - k.plus())) <= 1e-10 * max_abs(k.plus()));
    }

    #[test]
    fn detailed_balance_in_the_conditioned_range(seed in any::<u64>(), n in 1usize..8, x in 0.2f64..10.0) {
        let sys = system(seed, n);
        let beta = x / lambda_max(&sys);
        let pair = kms_covariances(&sys, beta).unwrap();
        prop_assert!(kms_detailed_balance(&pair, &sys, beta).unwrap() <= 1e-10);
    }

    #[test]
    fn evolution_conserves_energy(seed in any::<u64>(), n in 1usize..10, t in -5.0f64..5.0) {
        let sys = system(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let f = CauchyData::new(random_vector(&mut rng, n), random_vector(&mut rng, n)).unwrap();
        let before = sys.energy_form(&f, &f).re;
        let g = sys.evolve(&f, t).unwrap();
        prop_assert!((sys.energy_form(&g, &g).re - before).abs() <= 1e-10 * before);
    }

    #[test]
    fn pencil_factorizations_agree(seed in any::<u64>(), n in 1usize..10, re in -4.0f64..4.0, im in -4.0f64..4.0) {
        let (first, second) = system(seed, n).pencil_forms(C64::new(re, im));
        prop_assert!(op_norm(&(&first - &second)) <= 1e-12 * op_norm(&first).max(1.0));
    }

    #[test]
    fn gram_adjoint_moves_across_the_form(seed in any::<u64>(), n in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
        let space = GramSpace::from_diagonal(&weights).unwrap();
        let a = CMat::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let (u, v) = (random_vector(&mut rng, n), random_vector(&mut rng, n));
        let lhs = space.inner(&u, &(&a * &v));
        let rhs = space.inner(&(space.adjoint(&a) * &u), &v);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn bose_factors_are_complementary(x in -40.0f64..40.0) {
        prop_assume!(x.abs() > 1e-6);
        prop_assert!((bose_plus(x) + bose_minus(x) - 1.0).abs() <= 1e-12 * bose_plus(x).abs().max(1.0));
        let product = bose_plus(x) * bose_minus(x);
        prop_assert!((product + half_csch(x).powi(2)).abs() <= 1e-12 * product.abs().max(1e-300));
    }

    #[test]
    fn sectorial_ratio_is_scale_invariant(a in 0.5f64..3.0, b in -0.4f64..0.4, d in 0.5f64..3.0, im in -1.0f64..1.0, t in 0.1f64..10.0) {
        let k: MetricSample = [c(a), C64::new(b, im), c(d)];
        let scaled = k.map(|v| v * t);
        let r = sectorial_ratio(&k).unwrap();
        prop_assert!((sectorial_ratio(&scaled).unwrap() - r).abs() <= 1e-12 * (1.0 + r));
        let real: MetricSample = [c(a), c(b), c(d)];
        prop_assert_eq!(sectorial_ratio(&real).unwrap(), 0.0);
    }

    #[test]
    fn constant_metric_has_no_divergence_defect(a in 0.5f64..3.0, d in 0.5f64..3.0, im in -0.5f64..0.5, tx in -2.0f64..2.0, ty in -2.0f64..2.0) {
        let k: MetricSample = [C64::new(a, 0.1 * im), C64::new(0.0, im), C64::new(d, -0.2 * im)];
        let (m, field) = sample_periodic(8, 1.0, |_, _| k, |_, _| [c(tx), C64::new(0.0, ty)]).unwrap();
        prop_assert!(divergence_identity_check(&m, &field).unwrap() <= 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn disk_layer_potential_jump_is_exact(seed in any::<u64>(), n in 4usize..9, epsilon in 0.0f64..0.3) {
        let slice = LatticeSlice::sample(SliceGrid::staggered(1.0, n), &ToyHorizon::new(1.0, epsilon, 1.0), 1.0).unwrap();
        let disk = extend_to_disk(&slice, 2.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<C64> = random_vector(&mut rng, 2 * disk.boundary_len()).iter().copied().collect();
        let u = disk.layer_potential(&g).unwrap();
        let (plus, minus) = disk.one_sided_traces(&u);
        for j in 0..g.len() {
            prop_assert!((plus[j] - minus[j] + g[j]).norm() <= 1e-10);
        }
    }

    #[test]
    fn cylinder_form_is_sectorial(seed in any::<u64>(), epsilon in 0.0f64..0.5) {
        let slice = LatticeSlice::sample(SliceGrid::staggered(1.0, 6), &ToyHorizon::new(1.0, epsilon, 1.0), 1.0).unwrap();
        let prob = assemble_cylinder(&slice, 1.0, 16).unwrap();
        let bound = prob.metric().sectorial_constant();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let u: Vec<C64> = random_vector(&mut rng, prob.dim()).iter().copied().collect();
            let q = prob.form(&u);
            prop_assert!(q.re > 0.0);
            prop_assert!(q.im.abs() <= bound * q.re * (1.0 + 1e-12) + 1e-14);
        }
    }
}
