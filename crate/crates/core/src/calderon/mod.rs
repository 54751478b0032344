//! Green kernels and the spectral route to Calderón projectors.

mod green;
mod spectral;

pub use green::{green_eval, GreenKernel};
pub use spectral::{
    calderon_thermal, calderon_vacuum, lapse_thermal, lapse_vacuum, to_lapse, to_tilde,
    CalderonPair, Frame,
};
