//! Phase-space kernel for integrable-system experiments: an observable
//! expression language with symbolic gradients, canonical Poisson brackets,
//! Hamiltonian vector fields, fixed-step integrators and
//! superintegrable-structure checks.

pub mod bracket;
pub mod chart;
pub mod conserve;
pub mod error;
pub mod expr;
pub mod homogeneous;
pub mod integrate;
pub mod observable;
mod parse;

pub use bracket::{
    fd_bracket_fn, hamiltonian_vector_field, independence_rank, jacobi_defect, poisson_bracket,
    poisson_bracket_observable, structure_matrix, BracketScheme, StructureMatrix, TangentVector,
    DEFAULT_FD_STEP, NESTED_FD_STEP, RANK_THRESHOLD,
};
pub use chart::{PhaseChart, PhasePoint, SymbolTable};
pub use conserve::{conservation_report, ConservationReport};
pub use error::{CoreError, Result};
pub use homogeneous::{ExtendedTrajectory, HomogeneousObservable};
pub use integrate::{fmt_g17, integrate_hamilton, snap_steps, Method, Trajectory};
pub use observable::{parse_observable, Observable};
