//! Vacuum, thermal, double thermal and Hartle–Hawking–Israel covariances for
//! lattice Klein–Gordon fields, each computed by a spectral route and by an
//! elliptic (Calderón projector) route.

pub mod calderon;
pub mod error;
pub mod euclid;
pub mod linalg;
pub mod model;
pub mod random;
pub mod states;
pub mod thermal;
pub mod tolerances;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, GramSpace, SpectralSystem, C64};
pub use model::{CauchyData, FirstOrderSystem, LatticeSlice, SpatialOperators};
pub use tolerances::Tolerances;
