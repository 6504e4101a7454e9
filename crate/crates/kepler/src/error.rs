use actionangle_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KeplerError {
    #[error("point lies at the collision set r = 0")]
    Origin,

    #[error("point is in the excluded band (energy or angular momentum within tolerance of zero)")]
    ExcludedRegime,

    #[error("point is outside the chart domain: {0}")]
    ChartBoundary(&'static str),

    #[error("unbound regime has no orbital period")]
    NoPeriod,

    #[error("eccentricity {e} is outside the valid range for this regime")]
    InvalidEccentricity { e: f64 },

    #[error("root solve did not converge after {iterations} iterations (iterate {iterate}, residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        iterate: f64,
        residual: f64,
    },

    #[error("no return to the initial state was detected within the search window")]
    NoReturn,

    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, KeplerError>;
