//! Discretized stationary Klein–Gordon model: slices, spatial operators,
//! hypothesis checks and the first-order system.

mod first_order;
mod hypotheses;
mod slice;
mod spatial;

pub use first_order::{lapse_reduce, CauchyData, FirstOrderSystem, PENCIL_CONDITION_LIMIT};
pub use hypotheses::{validate_hypotheses, HypothesisReport};
pub use slice::{LatticeSlice, SliceGrid, SliceProfile, StaticSlab, ToyHorizon};
pub use spatial::{assemble_spatial, SpatialOperators};
