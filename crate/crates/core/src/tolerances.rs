//! Pass/fail thresholds for the acceptance checks. Every field can be
//! overridden from the `[tolerances]` table of an experiment config.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// `‖c±² − c±‖` and `‖c⁺ + c⁻ − 1‖` for spectral projectors.
    pub projector: f64,
    /// Relative positivity and absolute CCR defect of a covariance pair.
    pub state: f64,
    /// Purity defect of pure states.
    pub purity: f64,
    /// Lower bound on the purity defect of a single-wedge KMS state.
    pub impurity_floor: f64,
    /// Expected purity defect of the single-wedge KMS state, `β = 1`, `ω = 1`.
    pub single_kms_purity: f64,
    pub single_kms_purity_slack: f64,
    /// Relative detailed-balance residual.
    pub detailed_balance: f64,
    /// Entrywise relative gap to the Araki–Woods pairings.
    pub araki_woods: f64,
    /// `‖(H̃ − z)R(z) − 1‖`.
    pub resolvent: f64,
    /// Modewise cylinder symbol against `p(−ik)`.
    pub pencil: f64,
    /// Elliptic vs spectral `c⁺` at the finest cylinder.
    pub calderon_error: f64,
    pub calderon_order: f64,
    pub calderon_order_slack: f64,
    /// `‖(λ_HHI − λ_D)f‖ / ‖λ_D f‖`.
    pub gluing: f64,
    pub divergence_order: f64,
    pub divergence_order_slack: f64,
    /// `‖G(0⁺) − G(0⁻) − 1‖`.
    pub green_jump: f64,
    pub green_ode_order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            projector: 1e-10,
            state: 1e-10,
            purity: 1e-10,
            impurity_floor: 0.1,
            single_kms_purity: 0.92067,
            single_kms_purity_slack: 1e-3,
            detailed_balance: 1e-10,
            araki_woods: 1e-10,
            resolvent: 1e-10,
            pencil: 1e-10,
            calderon_error: 5e-2,
            calderon_order: 1.0,
            calderon_order_slack: 0.3,
            gluing: 5e-2,
            divergence_order: 2.0,
            divergence_order_slack: 0.2,
            green_jump: 1e-12,
            green_ode_order: 1.9,
        }
    }
}
