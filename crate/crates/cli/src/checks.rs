//! The computations behind each subcommand. Every function returns its
//! records (value against tolerance) and the CSV tables it writes.

use std::f64::consts::PI;

use hhi_forge_core::calderon::{calderon_thermal, calderon_vacuum, to_lapse, to_tilde, CalderonPair, GreenKernel};
use hhi_forge_core::euclid::{
    assemble_cylinder, calderon_elliptic, compare_calderon, divergence_identity_check, double_kms_full_slice,
    extend_to_disk, gluing_comparison, gluing_test_data, hhi_covariances, RandomSmoothMetric,
};
use hhi_forge_core::linalg::{max_abs, observed_order, real_diag, CMat};
use hhi_forge_core::model::{assemble_spatial, lapse_reduce, validate_hypotheses, SliceGrid, ToyHorizon};
use hhi_forge_core::random::random_system;
use hhi_forge_core::states::{
    araki_woods_lapse, check_purity, double_kms_covariances, kms_covariances, kms_detailed_balance, to_full_slice,
    vacuum_covariances, validate_state, wedge_double, CovariancePair, WedgeReflection,
};
use hhi_forge_core::{FirstOrderSystem, LatticeSlice, Result, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::report::{format_f64, Bound, Record, Table};

pub type Output = (Vec<Record>, Vec<Table>);

/// Inverse temperatures of the randomized spectral checks.
pub const SPECTRAL_BETAS: [f64; 3] = [0.5, 1.0, 2.0 * PI];
/// Inverse temperatures of the Araki–Woods comparison.
pub const ORACLE_BETAS: [f64; 3] = [0.5, 1.0, 2.0];
/// Slice sizes of the random systems (Cauchy dimension twice this).
pub const RANDOM_SIZES: [usize; 4] = [2, 8, 16, 32];
pub const DETAILED_BALANCE_SYSTEMS: usize = 20;
/// Largest `β λ_max` of the detailed-balance systems. The residual grows like
/// `1e-16 · e^{β λ_max}` and crosses `1e-10` near `β λ_max ≈ 13`.
pub const DETAILED_BALANCE_MAX_EXPONENT: f64 = 10.0;
pub const RESOLVENT_POINTS: usize = 5;
/// `c₀` of the region `|Im z| ≥ |Re z| + c₀` where the pencil is invertible.
pub const RESOLVENT_MARGIN: f64 = 1.0;
/// Grid sizes of the divergence identity study.
pub const DIVERGENCE_LEVELS: [usize; 3] = [32, 64, 128];
pub const DIVERGENCE_SAMPLES: usize = 3;
/// Steps of the Green kernel ODE residual.
pub const GREEN_STEPS: [f64; 2] = [1e-2, 5e-3];

fn toy(cfg: &ExperimentConfig) -> ToyHorizon {
    ToyHorizon::new(cfg.model.kappa, cfg.model.epsilon, cfg.model.mass_sq)
}

pub fn model_slice(cfg: &ExperimentConfig, n_y: usize) -> Result<LatticeSlice> {
    LatticeSlice::sample(SliceGrid::staggered(cfg.model.length, n_y), &toy(cfg), cfg.model.mass_sq)
}

pub fn model_system(cfg: &ExperimentConfig) -> Result<FirstOrderSystem> {
    lapse_reduce(&assemble_spatial(&model_slice(cfg, cfg.model.n_y)?)?)
}

fn state_row(table: &mut Table, name: &str, min_plus: f64, min_minus: f64, ccr: f64, purity: f64) {
    table.push(vec![name.to_string(), format_f64(min_plus), format_f64(min_minus), format_f64(ccr), format_f64(purity)]);
}

const STATE_HEADER: [&str; 5] = ["state", "min_eig_plus", "min_eig_minus", "ccr_defect", "purity_defect"];

/// State axioms of one pair. `pure` adds the purity bound; mixed states only
/// report their defect.
fn state_records(
    records: &mut Vec<Record>,
    table: &mut Table,
    name: &str,
    pair: &CovariancePair,
    pure: bool,
    cfg: &ExperimentConfig,
) -> Result<()> {
    let tol = cfg.tolerances;
    let report = validate_state(pair);
    let purity = check_purity(pair)?.defect();
    let hermitian = (report.hermitian_defect_plus / report.norm_plus.max(1.0))
        .max(report.hermitian_defect_minus / report.norm_minus.max(1.0));
    records.push(Record::new("positivity", name, report.positivity_defect(), Bound::AtMost(tol.state)));
    records.push(Record::new("ccr", name, report.ccr_defect, Bound::AtMost(tol.state)));
    records.push(Record::new("hermitian", name, hermitian, Bound::AtMost(tol.state)));
    if pure {
        records.push(Record::new("purity", name, purity, Bound::AtMost(tol.purity)));
    }
    state_row(table, name, report.min_eig_plus, report.min_eig_minus, report.ccr_defect, purity);
    Ok(())
}

pub fn validate_model(cfg: &ExperimentConfig, strict: bool) -> Result<Output> {
    let slice = model_slice(cfg, cfg.model.n_y)?;
    let mut report = validate_hypotheses(&assemble_spatial(&slice)?, cfg.model.delta)?;
    if strict {
        report = report.strict()?;
    }
    let records = vec![
        Record::new("operator-margin", "model", report.operator_margin, Bound::AtLeast(0.0)),
        Record::new("pointwise-margin", "model", report.pointwise_margin, Bound::AtLeast(0.0)),
    ];
    let mut table = Table::new("hypotheses.csv", &["quantity", "value"]);
    for (name, value) in [
        ("delta", report.delta),
        ("operator_margin", report.operator_margin),
        ("pointwise_margin", report.pointwise_margin),
        ("shift_ratio", report.shift_ratio),
        ("shift_star_ratio", report.shift_star_ratio),
        ("c1", report.c1),
        ("c2", report.c2),
        ("lapse_gradient", report.lapse_gradient),
        ("shift_divergence", report.shift_divergence),
        ("timelike_margin", report.timelike_margin),
        ("dirichlet_wall", report.dirichlet_wall),
    ] {
        table.push(vec![name.to_string(), format_f64(value)]);
    }
    Ok((records, vec![table]))
}

/// The systems of the randomized checks: the model system first, then one
/// random system per entry of [`RANDOM_SIZES`].
fn test_systems(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Vec<(String, FirstOrderSystem)>> {
    let mut out = vec![("model".to_string(), model_system(cfg)?)];
    for (k, &n) in RANDOM_SIZES.iter().enumerate() {
        out.push((format!("random-{k}"), random_system(rng, n, true)?));
    }
    Ok(out)
}

fn projector_defect(pair: &CalderonPair) -> f64 {
    pair.idempotency_defect().max(pair.complementarity_defect())
}

pub fn spectral_projectors(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Output> {
    let tol = cfg.tolerances;
    let mut records = Vec::new();
    let mut table = Table::new("projectors.csv", &["system", "dim", "beta", "frame", "idempotency", "complementarity"]);
    for (name, sys) in test_systems(cfg, rng)? {
        let dim = 2 * sys.n();
        let vacuum = calderon_vacuum(sys.spectral())?;
        let mut pairs = vec![(f64::INFINITY, vacuum)];
        for beta in SPECTRAL_BETAS {
            pairs.push((beta, calderon_thermal(sys.spectral(), beta)?));
        }
        for (beta, abstract_pair) in pairs {
            let tilde = to_tilde(&abstract_pair)?;
            let lapse = to_lapse(&tilde, &sys)?;
            for pair in [&abstract_pair, &tilde, &lapse] {
                let case = format!("{name} dim={dim} beta={} frame={}", format_f64(beta), pair.frame());
                records.push(Record::new("projector", case, projector_defect(pair), Bound::AtMost(tol.projector)));
                table.push(vec![
                    name.clone(),
                    dim.to_string(),
                    format_f64(beta),
                    pair.frame().to_string(),
                    format_f64(pair.idempotency_defect()),
                    format_f64(pair.complementarity_defect()),
                ]);
            }
        }

        let energy = sys.energy();
        let id = CMat::identity(dim, dim);
        for k in 0..RESOLVENT_POINTS {
            let re: f64 = rng.random_range(-3.0..3.0);
            let im = (re.abs() + RESOLVENT_MARGIN + rng.random_range(0.0..2.0)) * if k % 2 == 0 { 1.0 } else { -1.0 };
            let z = C64::new(re, im);
            let r = sys.resolvent(z)?;
            let defect = energy.op_norm(&((sys.generator() - &id * z) * r - &id));
            let case = format!("{name} z={}{:+}i", format_f64(re), im);
            records.push(Record::new("resolvent", case, defect, Bound::AtMost(tol.resolvent)));
        }

        for beta in SPECTRAL_BETAS {
            let kernel = GreenKernel::new(sys.spectral().clone(), beta)?;
            let case = format!("{name} beta={}", format_f64(beta));
            let endpoint = max_abs(&(kernel.eval(0.5 * beta)? - kernel.eval(-0.5 * beta)?));
            records.push(Record::new("green-endpoint", case.clone(), endpoint, Bound::AtMost(0.0)));
            let jump = energy.op_norm(&(kernel.jump()? - &id));
            records.push(Record::new("green-jump", case.clone(), jump, Bound::AtMost(tol.green_jump)));
            // the residual is O(h² λ³); the mid-window point keeps both steps
            // away from the jump
            let s = 0.25 * beta;
            let residuals: Vec<f64> =
                GREEN_STEPS.iter().map(|&h| kernel.ode_residual(s, h)).collect::<Result<_>>()?;
            let order = observed_order(&GREEN_STEPS, &residuals);
            records.push(Record::new("green-ode-order", case, order, Bound::AtLeast(tol.green_ode_order)));
        }
    }
    Ok((records, vec![table]))
}

pub fn cylinder_projectors(cfg: &ExperimentConfig) -> Result<Output> {
    let tol = cfg.tolerances;
    let slice = model_slice(cfg, cfg.model.n_y)?;
    let beta = cfg.beta();
    let mut records = Vec::new();
    let mut table = Table::new(
        "cylinder.csv",
        &["N_s", "sectorial_constant", "pencil_defect", "idempotency", "complementarity", "jump_bound"],
    );
    for &n_s in &cfg.cylinder.n_s {
        let prob = assemble_cylinder(&slice, beta, n_s)?;
        let pencil = prob.fourier_angles().iter().map(|&t| prob.pencil_identity_defect(t)).fold(0.0, f64::max);
        records.push(Record::new("pencil", format!("N_s={n_s}"), pencil, Bound::AtMost(tol.pencil)));
        let pair = calderon_elliptic(&prob)?;
        let bound = prob.jump_bound();
        let comp = pair.complementarity_defect();
        records.push(Record::new("jump", format!("N_s={n_s}"), comp, Bound::AtMost(bound)));
        table.push(vec![
            n_s.to_string(),
            format_f64(prob.metric().sectorial_constant()),
            format_f64(pencil),
            format_f64(pair.idempotency_defect()),
            format_f64(comp),
            format_f64(bound),
        ]);
    }
    Ok((records, vec![table]))
}

pub fn compare_calderon_study(cfg: &ExperimentConfig) -> Result<Output> {
    let tol = cfg.tolerances;
    let slice = model_slice(cfg, cfg.model.n_y)?;
    let beta = cfg.beta();
    let levels = cfg
        .cylinder
        .n_s
        .iter()
        .map(|&n_s| compare_calderon(&slice, beta, n_s))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new("compare_calderon.csv", &["n_y", "N_s", "beta", "error_fro", "error_op", "observed_order"]);
    let steps: Vec<f64> = levels.iter().map(|l| beta / l.n_s as f64).collect();
    let errors: Vec<f64> = levels.iter().map(|l| l.error_op).collect();
    for (k, level) in levels.iter().enumerate() {
        // order fitted over the levels up to this one
        let order = if k == 0 { String::new() } else { format_f64(observed_order(&steps[..=k], &errors[..=k])) };
        table.push(vec![
            cfg.model.n_y.to_string(),
            level.n_s.to_string(),
            format_f64(beta),
            format_f64(level.error_fro),
            format_f64(level.error_op),
            order,
        ]);
    }
    let finest = levels.last().expect("config has at least one level");
    let mut records =
        vec![Record::new("calderon-error", format!("N_s={}", finest.n_s), finest.error_op, Bound::AtMost(tol.calderon_error))];
    if levels.len() > 1 {
        let order = observed_order(&steps, &errors);
        let bound = Bound::AtLeast(tol.calderon_order - tol.calderon_order_slack);
        records.push(Record::new("calderon-order", format!("{} levels", levels.len()), order, bound));
    }
    Ok((records, vec![table]))
}

/// The scalar `ω = 1` system with `N = ρ = 1`.
pub fn unit_oscillator() -> Result<FirstOrderSystem> {
    FirstOrderSystem::from_parts(real_diag(&[1.0]), CMat::zeros(1, 1), vec![1.0], vec![1.0])
}

pub fn states_check(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Output> {
    let tol = cfg.tolerances;
    let beta = cfg.beta();
    let mut records = Vec::new();
    let mut axioms = Table::new("state_axioms.csv", &STATE_HEADER);

    let mut systems = vec![("model".to_string(), model_system(cfg)?)];
    for (k, n) in [3, 5, 8].into_iter().enumerate() {
        systems.push((format!("random-{k}"), random_system(rng, n, true)?));
    }
    for (name, sys) in &systems {
        let n = sys.n();
        let refl = if name == "model" {
            WedgeReflection::for_profile(&model_slice(cfg, cfg.model.n_y)?, &toy(cfg))?
        } else {
            WedgeReflection::unchecked(n)
        };
        let double = double_kms_covariances(sys, beta)?;
        let wedge = to_full_slice(&wedge_double(&double, &refl)?)?;
        state_records(&mut records, &mut axioms, &format!("vacuum/{name}"), &vacuum_covariances(sys)?, true, cfg)?;
        state_records(&mut records, &mut axioms, &format!("kms/{name}"), &kms_covariances(sys, beta)?, false, cfg)?;
        state_records(&mut records, &mut axioms, &format!("double-kms/{name}"), &double, true, cfg)?;
        state_records(&mut records, &mut axioms, &format!("wedge-double/{name}"), &wedge, true, cfg)?;
    }

    let unit = unit_oscillator()?;
    let single = kms_covariances(&unit, 1.0)?;
    state_records(&mut records, &mut axioms, "kms/unit-oscillator", &single, false, cfg)?;
    let defect = check_purity(&single)?.defect();
    records.push(Record::new("impurity", "kms/unit-oscillator", defect, Bound::AtLeast(tol.impurity_floor)));
    let expected = Bound::Within { target: tol.single_kms_purity, slack: tol.single_kms_purity_slack };
    records.push(Record::new("impurity-value", "kms/unit-oscillator", defect, expected));

    for k in 0..DETAILED_BALANCE_SYSTEMS {
        let sys = random_system(rng, 2 + k % 7, true)?;
        // e^{−βH} amplifies rounding in c⁺ by e^{β λ_max}, so β is drawn
        // relative to the spectral radius
        let lambda_max = sys.spectral().mode_eigenvalues().iter().fold(0.0_f64, |m, l| m.max(l.abs()));
        let x = rng.random_range(0.5..DETAILED_BALANCE_MAX_EXPONENT);
        let b = x / lambda_max;
        let residual = kms_detailed_balance(&kms_covariances(&sys, b)?, &sys, b)?;
        let case = format!("random-{k} beta={} beta*lambda_max={}", format_f64(b), format_f64(x));
        records.push(Record::new("detailed-balance", case, residual, Bound::AtMost(tol.detailed_balance)));
    }

    for (k, b) in ORACLE_BETAS.into_iter().enumerate() {
        for n in [2, 5, 8] {
            let sys = random_system(rng, n, true)?;
            let d = double_kms_covariances(&sys, b)?;
            let oracle = araki_woods_lapse(&sys, b)?;
            let scale = max_abs(d.plus()).max(max_abs(d.minus()));
            let gap = max_abs(&(oracle.plus() - d.plus())).max(max_abs(&(oracle.minus() - d.minus()))) / scale;
            let case = format!("oracle-{k} dim={} beta={}", 2 * n, format_f64(b));
            records.push(Record::new("araki-woods", case, gap, Bound::AtMost(tol.araki_woods)));
        }
    }
    Ok((records, vec![axioms]))
}

pub fn hhi(cfg: &ExperimentConfig) -> Result<Output> {
    let tol = cfg.tolerances;
    let beta = cfg.beta();
    let [a, b] = cfg.disk.support.map(|t| t * cfg.model.length);
    let mut records = Vec::new();
    let mut table = Table::new("hhi.csv", &["mesh", "support_offset", "gluing_rel_error"]);
    let mut axioms = Table::new("hhi_state_axioms.csv", &STATE_HEADER);
    let mut errors = Vec::new();
    for (level, &n) in cfg.disk.n_y.iter().enumerate() {
        let slice = model_slice(cfg, n)?;
        let disk = extend_to_disk(&slice, beta)?;
        let h = disk.spacing();
        let case = format!("n_y={n}");
        // support of the test data measured in cells from B and from the wall
        let from_b = a / h;
        let from_wall = (disk.radius() - b) / h;
        records.push(Record::new("support-from-b", case.clone(), from_b, Bound::AtLeast(3.0)));
        records.push(Record::new("support-from-wall", case.clone(), from_wall, Bound::AtLeast(n as f64 / 2.0)));
        let lambda_d = double_kms_full_slice(&disk)?;
        let data = gluing_test_data(&disk.boundary_points(), a, b);
        let report = gluing_comparison(&disk, &lambda_d, &data)?;
        let error = report.max_error();
        errors.push(error);
        table.push(vec![n.to_string(), format_f64(from_b), format_f64(error)]);
        if level == 0 {
            let pair = hhi_covariances(&disk)?;
            state_records(&mut records, &mut axioms, &format!("hhi/{case}"), &pair, true, cfg)?;
        }
        if level + 1 == cfg.disk.n_y.len() {
            let nodes = disk.boundary_len() as f64;
            records.push(Record::new("boundary-nodes", case.clone(), nodes, Bound::AtLeast(64.0)));
            records.push(Record::new("gluing", case, error, Bound::AtMost(tol.gluing)));
        }
    }
    for pair in errors.windows(2) {
        let case = format!("{} -> {}", format_f64(pair[0]), format_f64(pair[1]));
        // strictly decreasing under refinement
        records.push(Record::new("gluing-refinement", case, pair[1] / pair[0], Bound::AtMost(1.0 - f64::EPSILON)));
    }
    Ok((records, vec![table, axioms]))
}

pub fn divergence_check(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Output> {
    let tol = cfg.tolerances;
    let mut records = Vec::new();
    let mut table = Table::new("divergence.csv", &["sample", "n", "residual", "observed_order"]);
    let steps: Vec<f64> = DIVERGENCE_LEVELS.iter().map(|&n| 1.0 / n as f64).collect();
    for sample in 0..DIVERGENCE_SAMPLES {
        let metric = RandomSmoothMetric::sample(rng);
        let mut residuals = Vec::new();
        for (k, &n) in DIVERGENCE_LEVELS.iter().enumerate() {
            let (m, field) = metric.sample_grid(n)?;
            residuals.push(divergence_identity_check(&m, &field)?);
            let order = if k == 0 { String::new() } else { format_f64(observed_order(&steps[..=k], &residuals)) };
            table.push(vec![sample.to_string(), n.to_string(), format_f64(residuals[k]), order]);
        }
        let order = observed_order(&steps, &residuals);
        let bound = Bound::Within { target: tol.divergence_order, slack: tol.divergence_order_slack };
        records.push(Record::new("divergence-order", format!("sample-{sample}"), order, bound));
    }
    Ok((records, vec![table]))
}

/// `f64` values in a table column, for tests and tooling.
pub fn column(table: &Table, name: &str) -> Vec<f64> {
    let k = table.header.iter().position(|h| *h == name).expect("column exists");
    table.rows.iter().map(|r| r[k].parse().unwrap_or(f64::NAN)).collect()
}
