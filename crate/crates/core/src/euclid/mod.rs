//! The elliptic route: Wick-rotated operators on the cylinder and on the
//! extended disk, their Calderón projectors and the HHI covariances.

mod cylinder;
mod disk;
mod divergence;
mod metric;

pub use cylinder::{
    assemble_cylinder, calderon_elliptic, calderon_elliptic_unchecked, compare_calderon, CalderonError, CylinderProblem,
    JUMP_BOUND_FACTOR,
};
pub use disk::{
    bump, calderon_disk, double_kms_full_slice, extend_to_disk, fit_parity, gluing_comparison, gluing_test_data,
    hhi_apply, hhi_covariances, DiskProblem, GluingReport, ParityFit, OVERLAP_TOL, PARITY_TOL, TEMPERATURE_TOL,
};
pub use divergence::{divergence_identity_check, sample_periodic, FieldSample, RandomSmoothMetric};
pub use metric::{sectorial_ratio, wick_rotate, Chart, ComplexMetric2D, MetricSample};
