//! Non-adiabatic holonomy of driven integrable systems: classical transport
//! of action-angle data along parameter paths, reparametrization invariance
//! checks, grid-based quantum transport with half-density weights, Berry
//! phase multipliers for principal connections, and the isometry between the
//! original and initial-data quantizations.

pub mod classical;
pub mod config;
pub mod connection;
pub mod error;
pub mod grid;
pub mod path;
pub mod quantum;

pub use classical::{
    classical_holonomy, reparametrization_check, to_original_coordinates, HolonomyState,
    HolonomyTrajectory,
};
pub use config::{HolonomyConfig, InitialConfig};
pub use connection::{connection_symbols, ConnectionField};
pub use error::{HolonomyError, Result};
pub use grid::{eval_modes, significant_bandwidth, GridState};
pub use path::{ParameterPath, Reparametrization};
pub use quantum::{berry_multiplier, quantum_holonomy, r_isomorphism};
