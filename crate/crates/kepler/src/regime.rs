//! Partition of the phase space into the bound chart domain, the unbound
//! chart domain and the excluded band around `H = 0` and `M12 = 0`.

use actionangle_core::PhasePoint;

use crate::catalog::KeplerCatalog;
use crate::error::{KeplerError, Result};

/// Default half-width of the excluded band.
pub const DEFAULT_REGIME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// H < 0 and M12 != 0: bound orbits, so(3) structure.
    UMinus,
    /// H > 0 and M12 != 0: unbound orbits, so(2,1) structure.
    UPlus,
    /// Within tolerance of H = 0 or M12 = 0.
    Excluded,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::UMinus => "u_minus",
            Regime::UPlus => "u_plus",
            Regime::Excluded => "excluded",
        }
    }
}

pub fn classify_region(cat: &KeplerCatalog, z: &PhasePoint, eps_reg: f64) -> Result<Regime> {
    let r2 = z.q(0) * z.q(0) + z.q(1) * z.q(1);
    if r2 == 0.0 {
        return Err(KeplerError::Origin);
    }
    let h = cat.h.eval_at(z)?;
    let m = cat.m12.eval_at(z)?;
    if m.abs() <= eps_reg {
        return Ok(Regime::Excluded);
    }
    if h < -eps_reg {
        Ok(Regime::UMinus)
    } else if h > eps_reg {
        Ok(Regime::UPlus)
    } else {
        Ok(Regime::Excluded)
    }
}
