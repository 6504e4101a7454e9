//! Analytic verification of the bracket relations among the integrals.
//!
//! On the bound region the triple `(M12, L1, L2)` closes the Lie algebra
//! so(3) and `M^2 + L^2 = -1/(2H)`; on the unbound region `(M12, K1, K2)`
//! closes so(2,1) and `K^2 - M^2 = 1/(2H)`. Everything here is evaluated
//! with symbolic gradients; residuals are pure roundoff.

use actionangle_core::{poisson_bracket, BracketScheme, Observable, PhasePoint};

use crate::catalog::KeplerCatalog;
use crate::error::{KeplerError, Result};
use crate::regime::{classify_region, Regime};

/// Residual record of `verify_algebra`. The `bracket_m_x`, `bracket_x1_x2`
/// and `casimir` entries refer to the `L_i` rescaling on the bound region and
/// to the `K_i` rescaling on the unbound one.
#[derive(Debug, Clone)]
pub struct AlgebraResiduals {
    pub regime: Regime,
    /// |{M12, A_i} - (eta_2i A1 - eta_1i A2)| for i = 1, 2.
    pub bracket_m_a: [f64; 2],
    /// |{A1, A2} - 2 H M12|.
    pub bracket_a1_a2: f64,
    /// |{M12, L_i} - (eta_2i L1 - eta_1i L2)| or the K analogue.
    pub bracket_m_x: [f64; 2],
    /// |{L1, L2} + M12| on the bound region, |{K1, K2} - M12| on the unbound.
    pub bracket_x1_x2: f64,
    /// |M^2 + L^2 + 1/(2H)| or |K^2 - M^2 - 1/(2H)|.
    pub casimir: f64,
    /// Max entry-wise residual of the full so(3) / so(2,1) bracket table.
    pub so_matrix: f64,
}

impl AlgebraResiduals {
    pub fn max(&self) -> f64 {
        self.bracket_m_a[0]
            .max(self.bracket_m_a[1])
            .max(self.bracket_a1_a2)
            .max(self.bracket_m_x[0])
            .max(self.bracket_m_x[1])
            .max(self.bracket_x1_x2)
            .max(self.casimir)
            .max(self.so_matrix)
    }
}

fn bracket(f: &Observable, g: &Observable, z: &PhasePoint) -> Result<f64> {
    Ok(poisson_bracket(f, g, z, BracketScheme::Analytic)?)
}

pub fn verify_algebra(cat: &KeplerCatalog, z: &PhasePoint, eps_reg: f64) -> Result<AlgebraResiduals> {
    let regime = classify_region(cat, z, eps_reg)?;
    if regime == Regime::Excluded {
        return Err(KeplerError::ExcludedRegime);
    }

    let h = cat.h.eval_at(z)?;
    let m = cat.m12.eval_at(z)?;
    let a1 = cat.a1.eval_at(z)?;
    let a2 = cat.a2.eval_at(z)?;

    // {M12, A_1} = -A2 and {M12, A_2} = A1.
    let bracket_m_a = [
        (bracket(&cat.m12, &cat.a1, z)? + a2).abs(),
        (bracket(&cat.m12, &cat.a2, z)? - a1).abs(),
    ];
    let bracket_a1_a2 = (bracket(&cat.a1, &cat.a2, z)? - 2.0 * h * m).abs();

    let (x1, x2) = match regime {
        Regime::UMinus => (&cat.l1, &cat.l2),
        _ => (&cat.k1, &cat.k2),
    };
    let x1v = x1.eval_at(z)?;
    let x2v = x2.eval_at(z)?;
    let bracket_m_x = [
        (bracket(&cat.m12, x1, z)? + x2v).abs(),
        (bracket(&cat.m12, x2, z)? - x1v).abs(),
    ];
    let bracket_x1_x2 = match regime {
        Regime::UMinus => (bracket(x1, x2, z)? + m).abs(),
        _ => (bracket(x1, x2, z)? - m).abs(),
    };
    let casimir = match regime {
        Regime::UMinus => (m * m + x1v * x1v + x2v * x2v + 1.0 / (2.0 * h)).abs(),
        _ => (x1v * x1v + x2v * x2v - m * m - 1.0 / (2.0 * h)).abs(),
    };

    let so_matrix = so_matrix_residual(cat, z, regime)?;

    Ok(AlgebraResiduals {
        regime,
        bracket_m_a,
        bracket_a1_a2,
        bracket_m_x,
        bracket_x1_x2,
        casimir,
        so_matrix,
    })
}

/// Max entry-wise residual of
/// `{M_uv, M_ab} = g_ub M_va + g_va M_ub - g_ua M_vb - g_vb M_ua`
/// over all index pairs, where `M_i3 = -L_i` with the Euclidean metric on the
/// bound region and `M_i3 = -K_i` with the (+,+,-) metric on the unbound one.
pub fn so_matrix_residual(cat: &KeplerCatalog, z: &PhasePoint, regime: Regime) -> Result<f64> {
    let metric: [f64; 3] = match regime {
        Regime::UMinus => [1.0, 1.0, 1.0],
        Regime::UPlus => [1.0, 1.0, -1.0],
        Regime::Excluded => return Err(KeplerError::ExcludedRegime),
    };
    let (c1, c2) = match regime {
        Regime::UMinus => (&cat.l1, &cat.l2),
        _ => (&cat.k1, &cat.k2),
    };
    // Generator table M[u][v] as observables; only u < v stored.
    let m13 = c1.neg();
    let m23 = c2.neg();
    let gen = |u: usize, v: usize| -> Option<(Observable, f64)> {
        // Returns (observable, sign) with M_uv = sign * observable.
        match (u, v) {
            (0, 1) => Some((cat.m12.clone(), 1.0)),
            (1, 0) => Some((cat.m12.clone(), -1.0)),
            (0, 2) => Some((m13.clone(), 1.0)),
            (2, 0) => Some((m13.clone(), -1.0)),
            (1, 2) => Some((m23.clone(), 1.0)),
            (2, 1) => Some((m23.clone(), -1.0)),
            _ => None,
        }
    };
    let value = |u: usize, v: usize| -> Result<f64> {
        match gen(u, v) {
            Some((obs, sign)) => Ok(sign * obs.eval_at(z)?),
            None => Ok(0.0),
        }
    };

    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut worst = 0.0_f64;
    for &(u, v) in &pairs {
        for &(a, b) in &pairs {
            let (fu, fs) = gen(u, v).expect("upper pair");
            let (ga, gs) = gen(a, b).expect("upper pair");
            let lhs = fs * gs * bracket(&fu, &ga, z)?;
            let rhs = metric_entry(&metric, u, b) * value(v, a)?
                + metric_entry(&metric, v, a) * value(u, b)?
                - metric_entry(&metric, u, a) * value(v, b)?
                - metric_entry(&metric, v, b) * value(u, a)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

fn metric_entry(diag: &[f64; 3], i: usize, j: usize) -> f64 {
    if i == j {
        diag[i]
    } else {
        0.0
    }
}
