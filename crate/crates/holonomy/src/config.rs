//! JSON configuration for holonomy runs.
//!
//! ```json
//! {
//!   "connection": {"m": 1, "d": 1, "coeffs": [["sin(phi1)"]]},
//!   "path": {"T": 1.0, "components": ["t"], "derivatives": ["1"]},
//!   "initial": {"I": [1.0], "phi": [1.5707963267948966]},
//!   "lambda": [0.0],
//!   "step": 1e-4
//! }
//! ```
//!
//! Quantum runs replace `initial` with `{"grid_N": 256, "psi0_modes": [...]}`.
//! Unknown keys are rejected.

use num_complex::Complex64;
use serde::Deserialize;

use crate::classical::HolonomyState;
use crate::connection::ConnectionField;
use crate::error::{HolonomyError, Result};
use crate::grid::GridState;
use crate::path::ParameterPath;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyConfig {
    pub connection: ConnectionConfig,
    pub path: PathConfig,
    pub initial: InitialConfig,
    #[serde(default)]
    pub lambda: Vec<f64>,
    pub step: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionConfig {
    pub m: usize,
    pub d: usize,
    /// `coeffs[k][alpha]` over symbols `s1..sd`, `phi1..phim`.
    pub coeffs: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathConfig {
    #[serde(rename = "T")]
    pub t_end: f64,
    pub components: Vec<String>,
    pub derivatives: Vec<String>,
    #[serde(default)]
    pub breakpoints: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InitialConfig {
    Classical {
        #[serde(rename = "I")]
        actions: Vec<f64>,
        phi: Vec<f64>,
    },
    Quantum {
        #[serde(rename = "grid_N")]
        grid_n: usize,
        psi0_modes: Vec<ModeAmplitude>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeAmplitude {
    pub n: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

impl HolonomyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HolonomyError::Config(e.to_string()))
    }

    pub fn connection(&self) -> Result<ConnectionField> {
        ConnectionField::parse(self.connection.d, self.connection.m, &self.connection.coeffs)
    }

    pub fn parameter_path(&self) -> Result<ParameterPath> {
        ParameterPath::parse(
            self.path.t_end,
            &self.path.components,
            &self.path.derivatives,
            self.path.breakpoints.clone(),
        )
    }

    pub fn classical_initial(&self) -> Result<HolonomyState> {
        match &self.initial {
            InitialConfig::Classical { actions, phi } => {
                Ok(HolonomyState::new(actions.clone(), phi.clone()))
            }
            InitialConfig::Quantum { .. } => Err(HolonomyError::Config(
                "config carries a quantum initial state, expected I/phi".into(),
            )),
        }
    }

    pub fn quantum_initial(&self) -> Result<GridState> {
        match &self.initial {
            InitialConfig::Quantum { grid_n, psi0_modes } => {
                let modes: Vec<(Vec<i64>, Complex64)> = psi0_modes
                    .iter()
                    .map(|ma| (ma.n.clone(), Complex64::new(ma.re, ma.im)))
                    .collect();
                GridState::from_modes(self.connection.m, *grid_n, &modes)
            }
            InitialConfig::Classical { .. } => Err(HolonomyError::Config(
                "config carries a classical initial state, expected grid_N/psi0_modes".into(),
            )),
        }
    }
}
