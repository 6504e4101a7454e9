//! Homogeneous extension of a time-dependent Hamiltonian.
//!
//! A Hamiltonian `H(t, q, p)` extends to `H* = p0 + H` on the chart enlarged
//! by the conjugate pair `(t, p0)`. Restricted to `dt/ds = 1` the extended
//! flow reproduces the time-dependent Hamilton equation, with
//! `dp0/ds = -dH/dt` keeping `H*` equal to zero along the flow when started
//! at `p0 = -H`.

use crate::chart::PhasePoint;
use crate::error::{CoreError, Result};
use crate::integrate::{snap_steps, Trajectory};
use crate::observable::Observable;

#[derive(Debug, Clone)]
pub struct HomogeneousObservable {
    base: Observable,
}

/// Extended trajectory: the base chart samples plus the conjugate momentum
/// `p0` of time at each sample.
#[derive(Debug, Clone)]
pub struct ExtendedTrajectory {
    pub trajectory: Trajectory,
    pub p0: Vec<f64>,
}

impl HomogeneousObservable {
    pub fn new(base: Observable) -> Self {
        HomogeneousObservable { base }
    }

    pub fn base(&self) -> &Observable {
        &self.base
    }

    /// `H*(p0, z) = p0 + H(z)`.
    pub fn star_eval(&self, p0: f64, coords: &[f64]) -> Result<f64> {
        Ok(p0 + self.base.eval(coords)?)
    }

    /// The value of `p0` on the zero level of `H*` at a point.
    pub fn p0_on_shell(&self, coords: &[f64]) -> Result<f64> {
        Ok(-self.base.eval(coords)?)
    }

    /// Integrate the extended autonomous system
    /// `dt/ds = 1, dp0/ds = -dH/dt, dq/ds = dH/dp, dp/ds = -dH/dq`
    /// with RK4, starting on the `H* = 0` shell.
    pub fn integrate_extended(
        &self,
        z0: &PhasePoint,
        t_span: (f64, f64),
        step: f64,
    ) -> Result<ExtendedTrajectory> {
        self.base.check_point(z0)?;
        if !(step > 0.0) {
            return Err(CoreError::InvalidArgument("step must be positive".into()));
        }
        let chart = z0.chart().clone();
        let n = chart.n_dof();
        let (n_steps, dt) = snap_steps(t_span.0, t_span.1, step);

        // State layout: chart coordinates followed by p0.
        let mut coords = z0.coords().to_vec();
        if let Some(ti) = chart.t_index() {
            coords[ti] = t_span.0;
        }
        let mut p0 = self.p0_on_shell(&coords)?;

        let deriv = |t: f64, c: &mut [f64], out: &mut [f64], out_p0: &mut f64| -> bool {
            if let Some(ti) = chart.t_index() {
                c[ti] = t;
            }
            for i in 0..n {
                let dq = self.base.partial(chart.p_index(i)).eval(c);
                let dp = -self.base.partial(chart.q_index(i)).eval(c);
                if !dq.is_finite() || !dp.is_finite() {
                    return false;
                }
                out[chart.q_index(i)] = dq;
                out[chart.p_index(i)] = dp;
            }
            *out_p0 = match chart.t_index() {
                Some(ti) => {
                    let v = -self.base.partial(ti).eval(c);
                    if !v.is_finite() {
                        return false;
                    }
                    v
                }
                None => 0.0,
            };
            true
        };

        let dim = chart.dim();
        let mut samples = vec![(t_span.0, coords.clone())];
        let mut p0s = vec![p0];
        let mut k = vec![vec![0.0; dim]; 4];
        let mut kp0 = [0.0; 4];
        let mut work = vec![0.0; dim];

        for s in 0..n_steps {
            let t = t_span.0 + s as f64 * dt;
            let stage_times = [t, t + 0.5 * dt, t + 0.5 * dt, t + dt];
            let stage_scale = [0.0, 0.5, 0.5, 1.0];
            for stage in 0..4 {
                for i in 0..dim {
                    work[i] = if stage == 0 {
                        coords[i]
                    } else {
                        coords[i] + stage_scale[stage] * dt * k[stage - 1][i]
                    };
                }
                let (head, tail) = k.split_at_mut(stage);
                let _ = head;
                if !deriv(stage_times[stage], &mut work, &mut tail[0], &mut kp0[stage]) {
                    return Err(CoreError::Singularity { t: Some(t) });
                }
            }
            for i in 0..dim {
                coords[i] += dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
            }
            p0 += dt / 6.0 * (kp0[0] + 2.0 * kp0[1] + 2.0 * kp0[2] + kp0[3]);
            let t_next = if s + 1 == n_steps {
                t_span.1
            } else {
                t_span.0 + (s + 1) as f64 * dt
            };
            if let Some(ti) = chart.t_index() {
                coords[ti] = t_next;
            }
            samples.push((t_next, coords.clone()));
            p0s.push(p0);
        }

        let trajectory =
            Trajectory::from_samples(chart, crate::integrate::Method::Rk4, dt, samples);
        Ok(ExtendedTrajectory {
            trajectory,
            p0: p0s,
        })
    }
}
