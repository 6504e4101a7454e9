//! Quantum transport of torus wavefunctions along a parameter path.
//!
//! Each grid node is pulled back along the inverse characteristic flow of
//! the angle equation; the half-density factor is the square root of the
//! Jacobian of the inverse flow, integrated with the variational equation
//! rather than by differencing neighbouring characteristics. The offset
//! phase is `exp[-i lambda . (unwrapped angle displacement)]`, which reduces
//! to the flat phase factor of the principal case and is well defined on the
//! double cover for half-integer offsets.

use num_complex::Complex64;
use rayon::prelude::*;

use actionangle_core::snap_steps;
use actionangle_quantize::{ActionPolynomial, TorusState};

use crate::connection::ConnectionField;
use crate::error::{HolonomyError, Result};
use crate::grid::{eval_modes, significant_bandwidth, GridState};
use crate::path::ParameterPath;

const MIN_GRID: usize = 16;
const BANDWIDTH_FACTOR: usize = 4;
const COEFF_REL_TOL: f64 = 1e-10;

fn check_lambda(lambda: &[f64], m: usize) -> Result<()> {
    if lambda.len() != m {
        return Err(HolonomyError::DimensionMismatch {
            want: m,
            got: lambda.len(),
        });
    }
    for l in lambda {
        if *l != 0.0 && l.abs() != 0.5 {
            return Err(HolonomyError::BadLambda(*l));
        }
    }
    Ok(())
}

/// Empirical angular bandwidth of the connection: sample every coefficient
/// on the angle grid at a few parameter values and take the largest
/// significant frequency.
fn connection_bandwidth(conn: &ConnectionField, path: &ParameterPath, n: usize) -> Result<usize> {
    let d = conn.d();
    let m = conn.m();
    let mut sigma = vec![0.0; d];
    let mut worst = 0usize;
    for frac in [0.0, 0.5, 1.0] {
        path.eval(frac * path.t_end(), &mut sigma)?;
        for k in 0..m {
            for alpha in 0..d {
                let lam = conn.coefficient(k, alpha);
                let mut coords = vec![0.0; d + m];
                coords[..d].copy_from_slice(&sigma);
                let sample = GridState::from_fn(m, n, |phi| {
                    coords[d..].copy_from_slice(phi);
                    Complex64::new(lam.eval_raw(&coords), 0.0)
                });
                worst = worst.max(significant_bandwidth(&sample.to_modes(), COEFF_REL_TOL));
            }
        }
    }
    Ok(worst)
}

/// Backward characteristic from final angles `phi_end`: returns the initial
/// angles (unwrapped) and the Jacobian matrix of the inverse flow.
fn backward_characteristic(
    conn: &ConnectionField,
    path: &ParameterPath,
    phi_end: &[f64],
    step: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = conn.m();
    let d = conn.d();
    // State: chi (m) followed by the variational matrix V (m x m, row-major),
    // with V(T) = identity.
    let dim = m + m * m;
    let mut state = vec![0.0; dim];
    state[..m].copy_from_slice(phi_end);
    for i in 0..m {
        state[m + i * m + i] = 1.0;
    }

    let mut sigma = vec![0.0; d];
    let mut sigma_dot = vec![0.0; d];
    let mut coords = vec![0.0; d + m];
    let mut amat = vec![0.0; m * m];

    let mut rhs = |t: f64, s: &[f64], out: &mut [f64]| -> Result<()> {
        path.eval(t, &mut sigma)?;
        path.deriv(t, &mut sigma_dot)?;
        coords[..d].copy_from_slice(&sigma);
        coords[d..].copy_from_slice(&s[..m]);
        // Angle velocities and the phi-Jacobian A of the velocity field.
        for v in amat.iter_mut() {
            *v = 0.0;
        }
        for k in 0..m {
            out[k] = 0.0;
            for alpha in 0..d {
                if sigma_dot[alpha] == 0.0 {
                    continue;
                }
                let lam = conn.coefficient(k, alpha);
                out[k] += lam.eval(&coords)? * sigma_dot[alpha];
                for i in 0..m {
                    let dl = lam.partial(conn.angle_index(i)).eval(&coords);
                    if !dl.is_finite() {
                        return Err(HolonomyError::Core(
                            actionangle_core::CoreError::Singularity { t: None },
                        ));
                    }
                    amat[k * m + i] += dl * sigma_dot[alpha];
                }
            }
        }
        // dV/dt = A V.
        for r in 0..m {
            for c in 0..m {
                let mut acc = 0.0;
                for j in 0..m {
                    acc += amat[r * m + j] * s[m + j * m + c];
                }
                out[m + r * m + c] = acc;
            }
        }
        Ok(())
    };

    // Integrate each smooth segment backwards, last segment first.
    let mut cuts = vec![0.0];
    cuts.extend_from_slice(path.breakpoints());
    cuts.push(path.t_end());
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut work = vec![0.0; dim];
    for w in cuts.windows(2).rev() {
        let (t_lo, t_hi) = (w[0], w[1]);
        let (n_steps, dt_abs) = snap_steps(t_lo, t_hi, step);
        let dt = -dt_abs;
        for s in 0..n_steps {
            let t = t_hi + s as f64 * dt;
            rhs(t, &state, &mut k1)?;
            for i in 0..dim {
                work[i] = state[i] + 0.5 * dt * k1[i];
            }
            rhs(t + 0.5 * dt, &work, &mut k2)?;
            for i in 0..dim {
                work[i] = state[i] + 0.5 * dt * k2[i];
            }
            rhs(t + 0.5 * dt, &work, &mut k3)?;
            for i in 0..dim {
                work[i] = state[i] + dt * k3[i];
            }
            rhs(t + dt, &work, &mut k4)?;
            for i in 0..dim {
                state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }

    let chi = state[..m].to_vec();
    let jac = state[m..].to_vec();
    Ok((chi, jac))
}

fn det(m: usize, a: &[f64]) -> f64 {
    match m {
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        _ => {
            // LU with partial pivoting for the rare higher-dimensional case.
            let mut lu = a.to_vec();
            let mut sign = 1.0;
            let mut d = 1.0;
            for col in 0..m {
                let mut piv = col;
                for r in col + 1..m {
                    if lu[r * m + col].abs() > lu[piv * m + col].abs() {
                        piv = r;
                    }
                }
                if piv != col {
                    for c in 0..m {
                        lu.swap(col * m + c, piv * m + c);
                    }
                    sign = -sign;
                }
                let p = lu[col * m + col];
                if p == 0.0 {
                    return 0.0;
                }
                d *= p;
                for r in col + 1..m {
                    let f = lu[r * m + col] / p;
                    for c in col..m {
                        lu[r * m + c] -= f * lu[col * m + c];
                    }
                }
            }
            sign * d
        }
    }
}

/// Transport a wavefunction given on the angle grid along the path.
///
/// Offsets are restricted to 0 or +-1/2 per component; half-integer offsets
/// are carried on the double cover through the unwrapped displacement phase.
pub fn quantum_holonomy(
    conn: &ConnectionField,
    path: &ParameterPath,
    psi0: &GridState,
    lambda: &[f64],
    step: f64,
) -> Result<GridState> {
    let m = conn.m();
    if psi0.m() != m {
        return Err(HolonomyError::DimensionMismatch {
            want: m,
            got: psi0.m(),
        });
    }
    if path.d() != conn.d() {
        return Err(HolonomyError::DimensionMismatch {
            want: conn.d(),
            got: path.d(),
        });
    }
    check_lambda(lambda, m)?;
    let n = psi0.n();
    if n < MIN_GRID {
        return Err(HolonomyError::GridTooSmall(n));
    }
    let bandwidth = connection_bandwidth(conn, path, n)?;
    if bandwidth * BANDWIDTH_FACTOR > n {
        return Err(HolonomyError::GridTooCoarse {
            n,
            bandwidth,
            required: bandwidth * BANDWIDTH_FACTOR,
        });
    }

    let mut modes0 = psi0.to_modes();
    modes0.retain(|(_, c)| c.norm() > 1e-16);

    let values: Vec<Complex64> = (0..psi0.node_count())
        .into_par_iter()
        .map(|flat| -> Result<Complex64> {
            let phi_end = psi0.node_angles(flat);
            let (chi, jac) = backward_characteristic(conn, path, &phi_end, step)?;
            let j = det(m, &jac);
            let mut phase = 0.0;
            for k in 0..m {
                phase -= lambda[k] * (phi_end[k] - chi[k]);
            }
            let value = eval_modes(&modes0, &chi)
                * j.abs().sqrt()
                * Complex64::new(0.0, phase).exp();
            Ok(value)
        })
        .collect::<Result<_>>()?;

    GridState::new(m, n, values)
}

/// Phase multiplier of a Fourier mode under a principal (constant)
/// connection: `exp[-i n_j (sigma^a(T) - sigma^a(0)) Lambda^j_a]`.
pub fn berry_multiplier(
    conn: &ConnectionField,
    path: &ParameterPath,
    n: &[i64],
) -> Result<Complex64> {
    let matrix = conn.principal_matrix().ok_or(HolonomyError::NotPrincipal)?;
    if n.len() != conn.m() {
        return Err(HolonomyError::DimensionMismatch {
            want: conn.m(),
            got: n.len(),
        });
    }
    let disp = path.displacement()?;
    let mut phase = 0.0;
    for (j, row) in matrix.iter().enumerate() {
        for (alpha, lam) in row.iter().enumerate() {
            phase -= n[j] as f64 * disp[alpha] * lam;
        }
    }
    Ok(Complex64::new(0.0, phase).exp())
}

/// The isometry between the two quantizations: multiply mode `n` by
/// `exp[i t H(n + lambda)]`. Preserves norms and every action mean value.
pub fn r_isomorphism(state: &TorusState, h: &ActionPolynomial, t: f64) -> Result<TorusState> {
    if h.m() != state.m() {
        return Err(HolonomyError::DimensionMismatch {
            want: state.m(),
            got: h.m(),
        });
    }
    Ok(state.map_phases(|shifted| Complex64::new(0.0, t * h.eval(shifted)).exp()))
}
