//! Covariances of vacuum, KMS, double KMS and wedge-doubled states, with the
//! Araki–Woods oracle.

mod araki_woods;
mod covariance;
mod wedge;

pub use araki_woods::{araki_woods_lapse, araki_woods_pairing, AWOracle};
pub use covariance::{
    check_purity, double_kms_covariances, kms_covariances, kms_detailed_balance, validate_state,
    vacuum_covariances, CovariancePair, PurityReport, StateReport, CHARGE_CONDITION_LIMIT,
};
pub use wedge::{full_slice_permutation, to_full_slice, wedge_double, WedgeReflection};
