use thiserror::Error;

#[derive(Debug, Error)]
pub enum HolonomyError {
    #[error("connection coefficient {coefficient}: angle symbol used outside sin/cos breaks periodicity")]
    NotPeriodic { coefficient: String },

    #[error("offset components must be 0 or +-1/2, got {0}")]
    BadLambda(f64),

    #[error("grid with {n} points per angle is too coarse for connection bandwidth {bandwidth} (need at least {required})")]
    GridTooCoarse {
        n: usize,
        bandwidth: usize,
        required: usize,
    },

    #[error("grid needs at least 16 points per angle, got {0}")]
    GridTooSmall(usize),

    #[error("reparametrization is not monotone increasing at t = {t}")]
    NonMonotone { t: f64 },

    #[error("reparametrization endpoints ({got0}, {got1}) do not map onto (0, {want1})")]
    BadEndpoints { got0: f64, got1: f64, want1: f64 },

    #[error("dimension mismatch: expected {want}, got {got}")]
    DimensionMismatch { want: usize, got: usize },

    #[error("connection is not principal (a coefficient is non-constant)")]
    NotPrincipal,

    #[error("bad configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] actionangle_core::CoreError),

    #[error(transparent)]
    Quantize(#[from] actionangle_quantize::QuantizeError),
}

pub type Result<T> = std::result::Result<T, HolonomyError>;
