//! Characteristic-function evolution of multimode bosonic systems under
//! parametric amplification, amplitude damping and phase damping.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charfunc;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod matfun;
pub mod metrics;
pub mod params;
pub mod quadrature;

pub use charfunc::CharFunc;
pub use error::{Error, Result};
pub use evolution::{evolve_gaussian, steady_state, PropagatorMN, SteadyAlphaBeta};
pub use fock::{FockDensity, OracleReport};
pub use gaussian::{GaussianState, RealCM, StateSpec};
pub use linalg::C64;
pub use metrics::{EofResult, SeparabilityReport};
pub use params::{ParamsRecord, SystemParams};
