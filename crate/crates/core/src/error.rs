use thiserror::Error;

/// Errors produced by the phase-space kernel.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("exponent at byte {offset} must be a rational literal")]
    NonRationalExponent { offset: usize },

    #[error("symbol table mismatch between operands")]
    TableMismatch,

    #[error("duplicate or reserved symbol name `{0}`")]
    BadSymbol(String),

    #[error("coordinate vector has length {got}, chart has dimension {want}")]
    DimensionMismatch { got: usize, want: usize },

    #[error("evaluation singularity{}", match .t { Some(t) => format!(" at t = {t}"), None => String::new() })]
    Singularity { t: Option<f64> },

    #[error("integration halted by a singularity at t = {t}; last good state retained")]
    IntegrationHalted {
        t: f64,
        last_good: Box<crate::integrate::Trajectory>,
    },

    #[error("implicit stage solve did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
