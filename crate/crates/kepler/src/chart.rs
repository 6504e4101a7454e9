//! Global action-angle charts for both regimes and the time laws.
//!
//! On the bound region the momentum-map components `x_i = F_i(z)` give
//!   `I = -1/(2(x1^2+x2^2+x3^2))`,  `gamma = atan2(x2, x3)`,
//! with orbital elements `a = -1/(2I)`, `e = sqrt(1+2IM^2)`, and the cyclic
//! time `alpha = a^{3/2}(u - e sin u) mod 2pi` where `u` solves
//! `r = a(1 - e cos u)`. On the unbound region the hyperbolic analogues hold
//! with `x_i = S_i(z)`, `lambda = asinh(x3/sqrt(x2^2-x3^2))` and
//! `tau = a^{3/2}(u - e sinh u)` from `r = a(e cosh u - 1)`.

use actionangle_core::{poisson_bracket, BracketScheme, Observable, PhasePoint};

use crate::catalog::KeplerCatalog;
use crate::error::{KeplerError, Result};
use crate::regime::{classify_region, Regime};

const TAU: f64 = std::f64::consts::TAU;

/// Below this eccentricity the anomaly is indeterminate and the angular
/// position of `q` (perihelion reference fixed to the x-axis) is used.
pub const CIRCULAR_ECCENTRICITY: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct ActionAngleState {
    pub regime: Regime,
    /// Action; equals the energy, negative on the bound region.
    pub action: f64,
    pub x1: f64,
    /// `gamma` in [0, 2pi) on the bound region, `lambda` in R on the unbound.
    pub angle: f64,
    /// `alpha` in [0, 2pi) on the bound region, `tau` in R on the unbound.
    pub time_angle: f64,
    pub semi_axis: f64,
    pub eccentricity: f64,
}

fn wrap_angle(x: f64) -> f64 {
    let mut v = x % TAU;
    if v < 0.0 {
        v += TAU;
    }
    v
}

pub fn to_action_angle(cat: &KeplerCatalog, z: &PhasePoint, eps_reg: f64) -> Result<ActionAngleState> {
    let regime = classify_region(cat, z, eps_reg)?;
    let r = (z.q(0) * z.q(0) + z.q(1) * z.q(1)).sqrt();
    let pq = z.p(0) * z.q(0) + z.p(1) * z.q(1);
    let m2 = cat.m_squared(z)?;

    match regime {
        Regime::Excluded => Err(KeplerError::ExcludedRegime),
        Regime::UMinus => {
            let x1 = cat.f[0].eval_at(z)?;
            let x2 = cat.f[1].eval_at(z)?;
            let x3 = cat.f[2].eval_at(z)?;
            let norm2 = x1 * x1 + x2 * x2 + x3 * x3;
            if x3 == 0.0 {
                return Err(KeplerError::ChartBoundary("x3 = 0"));
            }
            let action = -0.5 / norm2;
            let gamma = wrap_angle(x2.atan2(x3));
            let a = -0.5 / action;
            let e = (1.0 + 2.0 * action * m2).max(0.0).sqrt();
            let time_angle = if e < CIRCULAR_ECCENTRICITY {
                let theta = z.q(1).atan2(z.q(0));
                wrap_angle(a.powf(1.5) * cat.m12.eval_at(z)?.signum() * theta)
            } else {
                let cos_u = ((1.0 - r / a) / e).clamp(-1.0, 1.0);
                let u = cos_u.acos() * if pq < 0.0 { -1.0 } else { 1.0 };
                wrap_angle(a.powf(1.5) * (u - e * u.sin()))
            };
            Ok(ActionAngleState {
                regime,
                action,
                x1,
                angle: gamma,
                time_angle,
                semi_axis: a,
                eccentricity: e,
            })
        }
        Regime::UPlus => {
            let x1 = cat.s[0].eval_at(z)?;
            let x2 = cat.s[1].eval_at(z)?;
            let x3 = cat.s[2].eval_at(z)?;
            let c2 = x2 * x2 - x3 * x3;
            if !(c2 > 0.0) || x2 <= 0.0 {
                return Err(KeplerError::ChartBoundary("x2 <= |x3|"));
            }
            let action = 0.5 / (x1 * x1 + c2);
            let lambda = (x3 / c2.sqrt()).asinh();
            let a = 0.5 / action;
            let e = (1.0 + 2.0 * action * m2).sqrt();
            let cosh_u = ((1.0 + r / a) / e).max(1.0);
            let u = cosh_u.acosh() * if pq < 0.0 { -1.0 } else { 1.0 };
            let tau = a.powf(1.5) * (u - e * u.sinh());
            Ok(ActionAngleState {
                regime,
                action,
                x1,
                angle: lambda,
                time_angle: tau,
                semi_axis: a,
                eccentricity: e,
            })
        }
    }
}

/// Forward time law: `alpha(phi)` on the bound region (not reduced),
/// `tau(s)` on the unbound one.
pub fn kepler_time(phi: f64, a: f64, e: f64, regime: Regime) -> Result<f64> {
    let scale = a.powf(1.5);
    match regime {
        Regime::UMinus => Ok(phi - scale * e * (phi / scale).sin()),
        Regime::UPlus => Ok(phi - scale * e * (phi / scale).sinh()),
        Regime::Excluded => Err(KeplerError::ExcludedRegime),
    }
}

const SOLVE_TOL: f64 = 1e-12;
const SOLVE_MAX_ITER: usize = 60;

/// Invert the time law by Newton iteration: find `phi` with
/// `phi - a^{3/2} e sin(a^{-3/2} phi) = alpha` (elliptic) or the `sinh`
/// analogue (hyperbolic), to |residual| < 1e-12.
pub fn solve_kepler(alpha: f64, a: f64, e: f64, regime: Regime) -> Result<f64> {
    let scale = a.powf(1.5);
    match regime {
        Regime::UMinus => {
            if !(0.0..1.0).contains(&e) {
                return Err(KeplerError::InvalidEccentricity { e });
            }
            let mut phi = alpha;
            for _ in 0..SOLVE_MAX_ITER {
                let u = phi / scale;
                let g = phi - scale * e * u.sin() - alpha;
                if g.abs() < SOLVE_TOL {
                    return Ok(phi);
                }
                phi -= g / (1.0 - e * u.cos());
            }
            let residual = (phi - scale * e * (phi / scale).sin() - alpha).abs();
            if residual < SOLVE_TOL {
                Ok(phi)
            } else {
                Err(KeplerError::NonConvergence {
                    iterations: SOLVE_MAX_ITER,
                    iterate: phi,
                    residual,
                })
            }
        }
        Regime::UPlus => {
            if e <= 1.0 {
                return Err(KeplerError::InvalidEccentricity { e });
            }
            // Seed from the dominant sinh term.
            let mut phi = scale * (-alpha / (scale * e)).asinh();
            for _ in 0..SOLVE_MAX_ITER {
                let u = phi / scale;
                let g = phi - scale * e * u.sinh() - alpha;
                if g.abs() < SOLVE_TOL {
                    return Ok(phi);
                }
                phi -= g / (1.0 - e * u.cosh());
            }
            let residual = (phi - scale * e * (phi / scale).sinh() - alpha).abs();
            if residual < SOLVE_TOL {
                Ok(phi)
            } else {
                Err(KeplerError::NonConvergence {
                    iterations: SOLVE_MAX_ITER,
                    iterate: phi,
                    residual,
                })
            }
        }
        Regime::Excluded => Err(KeplerError::ExcludedRegime),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DarbouxResiduals {
    /// |{I, F1}|
    pub action_x1: f64,
    /// |{I, gamma}|
    pub action_angle: f64,
    /// |{F1, gamma} - 1|
    pub x1_angle: f64,
}

impl DarbouxResiduals {
    pub fn max(&self) -> f64 {
        self.action_x1.max(self.action_angle).max(self.x1_angle)
    }
}

/// Build the chart functions `I`, `x1 = F1` and `gamma = atan2(F2, F3)` as
/// observables and verify their canonical brackets analytically:
/// `{I, F1} = 0`, `{I, gamma} = 0`, `{F1, gamma} = 1`.
pub fn verify_darboux_triplet(
    cat: &KeplerCatalog,
    z: &PhasePoint,
    eps_reg: f64,
) -> Result<DarbouxResiduals> {
    let regime = classify_region(cat, z, eps_reg)?;
    if regime != Regime::UMinus {
        return Err(KeplerError::ChartBoundary("bound-region chart only"));
    }
    let i_obs = action_observable(cat)?;
    let gamma_obs = angle_observable(cat)?;
    let f1 = &cat.f[0];

    let b = |f: &Observable, g: &Observable| -> Result<f64> {
        Ok(poisson_bracket(f, g, z, BracketScheme::Analytic)?)
    };
    Ok(DarbouxResiduals {
        action_x1: b(&i_obs, f1)?.abs(),
        action_angle: b(&i_obs, &gamma_obs)?.abs(),
        x1_angle: (b(f1, &gamma_obs)? - 1.0).abs(),
    })
}

/// `I = -1/(2(F1^2+F2^2+F3^2))` as an observable (bound region).
pub fn action_observable(cat: &KeplerCatalog) -> Result<Observable> {
    let sq = |o: &Observable| o.mul(o);
    let norm2 = sq(&cat.f[0])?.add(&sq(&cat.f[1])?)?.add(&sq(&cat.f[2])?)?;
    Ok(norm2.scale(-2.0).pow(-1.0))
}

/// `gamma = atan2(F2, F3)` as an observable (bound region).
pub fn angle_observable(cat: &KeplerCatalog) -> Result<Observable> {
    Ok(Observable::atan2(&cat.f[1], &cat.f[2])?)
}

/// Finite-difference measurement of `{I, alpha}` at a point of the bound
/// region. The sign is reported, not asserted: the chart fixes only the
/// triplet brackets.
pub fn measure_action_time_bracket(cat: &KeplerCatalog, z: &PhasePoint, eps_reg: f64) -> Result<f64> {
    let h = 1e-6;
    let chart = cat.chart.clone();
    let alpha_of = |coords: &[f64]| -> Result<f64> {
        let zz = chart.point(coords.to_vec())?;
        Ok(to_action_angle(cat, &zz, eps_reg)?.time_angle)
    };
    // {I, alpha} = sum_i dI/dp_i dalpha/dq_i - dI/dq_i dalpha/dp_i, with the
    // alpha partials by central differences unwrapped across the 2pi seam.
    let mut acc = 0.0;
    let coords = z.coords();
    let grad_i = cat.h.grad_eval(coords)?; // I = H on the chart domain
    for i in 0..2 {
        let qi = chart.q_index(i);
        let pi = chart.p_index(i);
        let partial = |idx: usize| -> Result<f64> {
            let mut plus = coords.to_vec();
            let mut minus = coords.to_vec();
            plus[idx] += h;
            minus[idx] -= h;
            let mut d = alpha_of(&plus)? - alpha_of(&minus)?;
            if d > std::f64::consts::PI {
                d -= TAU;
            } else if d < -std::f64::consts::PI {
                d += TAU;
            }
            Ok(d / (2.0 * h))
        };
        acc += grad_i[pi] * partial(qi)? - grad_i[qi] * partial(pi)?;
    }
    Ok(acc)
}

/// Finite-difference measurement of `{x1, lambda}` on the unbound region;
/// the chart pins only |{x1, lambda}| = 1 and the sign is reported.
pub fn measure_x1_lambda_bracket(cat: &KeplerCatalog, z: &PhasePoint, eps_reg: f64) -> Result<f64> {
    let h = 1e-6;
    let chart = cat.chart.clone();
    let lambda_of = |coords: &[f64]| -> Result<f64> {
        let zz = chart.point(coords.to_vec())?;
        Ok(to_action_angle(cat, &zz, eps_reg)?.angle)
    };
    let mut acc = 0.0;
    let coords = z.coords();
    let grad_x1 = cat.s[0].grad_eval(coords)?;
    for i in 0..2 {
        let qi = chart.q_index(i);
        let pi = chart.p_index(i);
        let partial = |idx: usize| -> Result<f64> {
            let mut plus = coords.to_vec();
            let mut minus = coords.to_vec();
            plus[idx] += h;
            minus[idx] -= h;
            Ok((lambda_of(&plus)? - lambda_of(&minus)?) / (2.0 * h))
        };
        acc += grad_x1[pi] * partial(qi)? - grad_x1[qi] * partial(pi)?;
    }
    Ok(acc)
}
