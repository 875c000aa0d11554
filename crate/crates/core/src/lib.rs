//! Character formulas for SL(2,R) and SU(2): integral formulas over characteristic
//! cycles in `T*CP^1`, fixed point formulas, and the machinery relating them.

pub mod characters;
pub mod cycles;
pub mod error;
pub mod flag;
pub mod harness;
pub mod lie;
pub mod quadrature;

pub use error::{Error, Result};
pub use flag::{
    flow_velocity, flow_velocity_in, kks_eval, lambda_transport, moment, pulled_back_area,
    twisted_moment, Chart, CotangentPoint, FlagPoint, TangentVector, Weight,
};
pub use lie::{classify, spectral_data, CovectorValue, RegularityClass, Sl2Element, SpectralData};
pub use num_complex::Complex64;
