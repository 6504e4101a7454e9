//! Classical transport of action-angle data along a parameter path:
//!
//! ```text
//! d(phi^i)/dt =  Lambda^i_a(sigma(t), phi) d(sigma^a)/dt
//! d(I_i)/dt   = -I_k d(Lambda^k_a)/d(phi^i)(sigma(t), phi) d(sigma^a)/dt
//! ```
//!
//! The angle equation is autonomous in the parameters, so the endpoint
//! depends only on the traced curve; the action equation is linear in `I`
//! once the angle solution is known.

use std::io::Write;

use actionangle_core::{fmt_g17, snap_steps};
use actionangle_quantize::ActionPolynomial;

use crate::connection::ConnectionField;
use crate::error::{HolonomyError, Result};
use crate::path::{ParameterPath, Reparametrization};

const TAU: f64 = std::f64::consts::TAU;

/// Actions and angles; angles are reduced to [0, 2pi).
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyState {
    pub actions: Vec<f64>,
    pub angles: Vec<f64>,
}

impl HolonomyState {
    pub fn new(actions: Vec<f64>, angles: Vec<f64>) -> Self {
        let angles = angles.into_iter().map(|a| a.rem_euclid(TAU)).collect();
        HolonomyState { actions, angles }
    }
}

/// Transport samples. Angles are kept unwrapped internally so endpoint
/// comparisons and winding-sensitive phases remain meaningful; `state`
/// reduces them.
#[derive(Debug, Clone)]
pub struct HolonomyTrajectory {
    pub times: Vec<f64>,
    pub actions: Vec<Vec<f64>>,
    /// Unwrapped angle histories.
    pub angles_raw: Vec<Vec<f64>>,
}

impl HolonomyTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> HolonomyState {
        HolonomyState::new(self.actions[i].clone(), self.angles_raw[i].clone())
    }

    pub fn last_raw(&self) -> (&[f64], &[f64]) {
        let i = self.len() - 1;
        (&self.actions[i], &self.angles_raw[i])
    }

    /// CSV `t,I1..Im,phi1..phim` with angles reduced to [0, 2pi).
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let m = self.actions[0].len();
        write!(w, "t")?;
        for i in 1..=m {
            write!(w, ",I{i}")?;
        }
        for i in 1..=m {
            write!(w, ",phi{i}")?;
        }
        writeln!(w)?;
        for i in 0..self.len() {
            write!(w, "{}", fmt_g17(self.times[i]))?;
            for v in &self.actions[i] {
                write!(w, ",{}", fmt_g17(*v))?;
            }
            for v in &self.angles_raw[i] {
                write!(w, ",{}", fmt_g17(v.rem_euclid(TAU)))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Right-hand side evaluation shared by the transports: `sigma`/`sigma_dot`
/// may come from the raw path or from a reparametrized one.
struct Transport<'a> {
    conn: &'a ConnectionField,
    coords: Vec<f64>,
}

impl<'a> Transport<'a> {
    fn new(conn: &'a ConnectionField) -> Self {
        Transport {
            conn,
            coords: vec![0.0; conn.d() + conn.m()],
        }
    }

    /// `state = [phi; I]`, `deriv` likewise.
    fn eval(
        &mut self,
        sigma: &[f64],
        sigma_dot: &[f64],
        state: &[f64],
        deriv: &mut [f64],
    ) -> Result<()> {
        let m = self.conn.m();
        let d = self.conn.d();
        self.coords[..d].copy_from_slice(sigma);
        self.coords[d..].copy_from_slice(&state[..m]);
        for i in 0..m {
            deriv[i] = 0.0;
            deriv[m + i] = 0.0;
        }
        for k in 0..m {
            for alpha in 0..d {
                if sigma_dot[alpha] == 0.0 {
                    continue;
                }
                let lam = self.conn.coefficient(k, alpha);
                deriv[k] += lam.eval(&self.coords)? * sigma_dot[alpha];
                for i in 0..m {
                    let dl = lam.partial(self.conn.angle_index(i)).eval(&self.coords);
                    if !dl.is_finite() {
                        return Err(HolonomyError::Core(
                            actionangle_core::CoreError::Singularity { t: None },
                        ));
                    }
                    deriv[m + i] -= state[m + k] * dl * sigma_dot[alpha];
                }
            }
        }
        Ok(())
    }
}

/// Supplies `sigma` and `sigma_dot` at a stage time; the active integration
/// span disambiguates one-sided derivatives at segment boundaries.
type SigmaSource<'a> = dyn FnMut(f64, (f64, f64), &mut [f64], &mut [f64]) -> Result<()> + 'a;

fn rk4_segment(
    transport: &mut Transport<'_>,
    sigma_of: &mut SigmaSource<'_>,
    span: (f64, f64),
    step: f64,
    state: &mut [f64],
    mut record: impl FnMut(f64, &[f64]),
) -> Result<()> {
    let (n_steps, dt) = snap_steps(span.0, span.1, step);
    let dim = state.len();
    let d = transport.conn.d();
    let mut sigma = vec![0.0; d];
    let mut sigma_dot = vec![0.0; d];
    let mut k = vec![vec![0.0; dim]; 4];
    let mut work = vec![0.0; dim];
    for s in 0..n_steps {
        let t = span.0 + s as f64 * dt;
        let stage_times = [t, t + 0.5 * dt, t + 0.5 * dt, t + dt];
        let stage_scale = [0.0, 0.5, 0.5, 1.0];
        for stage in 0..4 {
            for i in 0..dim {
                work[i] = if stage == 0 {
                    state[i]
                } else {
                    state[i] + stage_scale[stage] * dt * k[stage - 1][i]
                };
            }
            sigma_of(stage_times[stage], span, &mut sigma, &mut sigma_dot)?;
            let (head, tail) = k.split_at_mut(stage);
            let _ = head;
            transport.eval(&sigma, &sigma_dot, &work, &mut tail[0])?;
        }
        for i in 0..dim {
            state[i] += dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
        }
        let t_next = if s + 1 == n_steps {
            span.1
        } else {
            span.0 + (s + 1) as f64 * dt
        };
        record(t_next, state);
    }
    Ok(())
}

fn segment_spans(t_end: f64, breakpoints: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0];
    cuts.extend_from_slice(breakpoints);
    cuts.push(t_end);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Integrate the transport equations along the path with RK4.
pub fn classical_holonomy(
    conn: &ConnectionField,
    path: &ParameterPath,
    s0: &HolonomyState,
    step: f64,
) -> Result<HolonomyTrajectory> {
    if path.d() != conn.d() {
        return Err(HolonomyError::DimensionMismatch {
            want: conn.d(),
            got: path.d(),
        });
    }
    if s0.actions.len() != conn.m() || s0.angles.len() != conn.m() {
        return Err(HolonomyError::DimensionMismatch {
            want: conn.m(),
            got: s0.actions.len(),
        });
    }
    if !(step > 0.0) {
        return Err(HolonomyError::Config("step must be positive".into()));
    }
    let m = conn.m();
    let mut state: Vec<f64> = s0.angles.iter().chain(&s0.actions).copied().collect();
    let mut traj = HolonomyTrajectory {
        times: vec![0.0],
        actions: vec![s0.actions.clone()],
        angles_raw: vec![s0.angles.clone()],
    };
    let mut transport = Transport::new(conn);
    let mut sigma_of =
        |t: f64, _span: (f64, f64), sigma: &mut [f64], sigma_dot: &mut [f64]| -> Result<()> {
            path.eval(t, sigma)?;
            path.deriv(t, sigma_dot)?;
            Ok(())
        };
    for span in segment_spans(path.t_end(), path.breakpoints()) {
        rk4_segment(
            &mut transport,
            &mut sigma_of,
            span,
            step,
            &mut state,
            |t, s| {
                traj.times.push(t);
                traj.angles_raw.push(s[..m].to_vec());
                traj.actions.push(s[m..].to_vec());
            },
        )?;
    }
    Ok(traj)
}

/// Integrate along the reparametrized path and report the max-norm deviation
/// of the final `(I, phi)` from the unreparametrized endpoint.
pub fn reparametrization_check(
    conn: &ConnectionField,
    path: &ParameterPath,
    repar: &Reparametrization,
    s0: &HolonomyState,
    step: f64,
) -> Result<f64> {
    repar.validate(path.t_end())?;
    let base = classical_holonomy(conn, path, s0, step)?;

    let m = conn.m();
    let mut state: Vec<f64> = s0.angles.iter().chain(&s0.actions).copied().collect();
    let mut transport = Transport::new(conn);
    let mut sigma_of =
        |t: f64, span: (f64, f64), sigma: &mut [f64], sigma_dot: &mut [f64]| -> Result<()> {
            let u = repar.eval(t)?;
            let du = repar.deriv_within(t, span)?;
            path.eval(u, sigma)?;
            path.deriv(u, sigma_dot)?;
            for v in sigma_dot.iter_mut() {
                *v *= du;
            }
            Ok(())
        };
    // Breakpoints of the composition: the repar's own plus the preimages of
    // the path's.
    let mut bps = repar.breakpoints();
    for pb in path.breakpoints() {
        bps.push(invert_monotone(repar, *pb)?);
    }
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    for span in segment_spans(repar.t_end(), &bps) {
        rk4_segment(&mut transport, &mut sigma_of, span, step, &mut state, |_, _| {})?;
    }

    let (base_i, base_phi) = base.last_raw();
    let mut dev = 0.0_f64;
    for i in 0..m {
        dev = dev.max((state[m + i] - base_i[i]).abs());
        dev = dev.max((state[i] - base_phi[i]).abs());
    }
    Ok(dev)
}

fn invert_monotone(repar: &Reparametrization, target: f64) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = repar.t_end();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if repar.eval(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Map an initial-data trajectory back to the original angles:
/// `phi^i(t) = phibar^i(t) + t dH/dI_i(I(t))`. Actions are untouched.
pub fn to_original_coordinates(
    traj: &HolonomyTrajectory,
    h: &ActionPolynomial,
) -> Result<HolonomyTrajectory> {
    let m = traj.actions[0].len();
    if h.m() != m {
        return Err(HolonomyError::DimensionMismatch { want: m, got: h.m() });
    }
    let mut out = traj.clone();
    for i in 0..traj.len() {
        let t = traj.times[i];
        let grad = h.grad(&traj.actions[i]);
        for k in 0..m {
            out.angles_raw[i][k] += t * grad[k];
        }
    }
    Ok(out)
}
