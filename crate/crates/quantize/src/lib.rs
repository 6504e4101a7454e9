//! Quantization of integrable systems in action-angle variables on a torus:
//! finite Fourier-mode states, action and Schrodinger operators for affine
//! functions of the actions, Dirac-condition residuals and spectra of
//! polynomial Hamiltonians.

pub mod affine;
pub mod error;
pub mod fourier;
pub mod operator;
pub mod poly;
pub mod spectrum;
pub mod state;

pub use affine::AffineObservable;
pub use error::{QuantizeError, Result};
pub use fourier::FourierPoly;
pub use operator::{action_operator, dirac_residual, evolve_free, schrodinger_operator};
pub use poly::ActionPolynomial;
pub use spectrum::{kepler_quantum_example, spectrum, write_spectrum_csv, ModeBox};
pub use state::TorusState;
