//! Command-line front end: experiment configuration, batch verification and
//! machine-readable result emission. The acceptance suite lives here so that
//! `report-all` and the acceptance test target run the same code.

pub mod acceptance;
pub mod acceptance_support;
pub mod commands;
pub mod error;
pub mod report;
pub mod sampling;

pub use commands::RunOutcome;
pub use error::{CliError, Result};
pub use report::{Check, CriterionReport, Report};

/// Cap the global thread pool from `ACTIONANGLE_THREADS` (0 or unset = auto).
/// Call once at startup; later calls are ignored.
pub fn init_thread_pool() {
    if let Ok(text) = std::env::var("ACTIONANGLE_THREADS") {
        if let Ok(n) = text.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
