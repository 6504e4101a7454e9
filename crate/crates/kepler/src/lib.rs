//! The planar two-body system: integrals of motion and their so(3)/so(2,1)
//! bracket algebra, regime classification, global action-angle charts with
//! the cyclic time law, and orbit-level verification helpers.

pub mod algebra;
pub mod catalog;
pub mod chart;
pub mod error;
pub mod orbit;
pub mod regime;

pub use algebra::{so_matrix_residual, verify_algebra, AlgebraResiduals};
pub use catalog::{kepler_observables, KeplerCatalog};
pub use chart::{
    action_observable, angle_observable, kepler_time, measure_action_time_bracket,
    measure_x1_lambda_bracket, solve_kepler, to_action_angle, verify_darboux_triplet,
    ActionAngleState, DarbouxResiduals, CIRCULAR_ECCENTRICITY,
};
pub use error::{KeplerError, Result};
pub use orbit::{orbit_period_check, orbit_scan, perihelion_state, OrbitScan, PeriodCheck};
pub use regime::{classify_region, Regime, DEFAULT_REGIME_TOL};
