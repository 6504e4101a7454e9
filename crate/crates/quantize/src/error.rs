use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuantizeError {
    #[error("angle index {index} out of range for {m} torus dimensions")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("coefficient function violates the reality constraint c_{{-n}} = conj(c_n)")]
    NotReal,

    #[error("dimension mismatch: expected {want}, got {got}")]
    DimensionMismatch { want: usize, got: usize },

    #[error("mode box is empty")]
    EmptyBox,

    #[error("mode frequencies must be integer or half-integer, got {0}")]
    BadFrequency(f64),

    #[error("not a polynomial in the actions: {0}")]
    NotPolynomial(String),

    #[error("bad state document: {0}")]
    BadState(String),

    #[error(transparent)]
    Core(#[from] actionangle_core::CoreError),
}

pub type Result<T> = std::result::Result<T, QuantizeError>;
