//! Fixed-step integrators for Hamiltonian flows.
//!
//! Both methods use a uniform step: the requested step is snapped so that an
//! integer number of steps lands exactly on the end of the span. For
//! time-dependent Hamiltonians the chart's `t` symbol is kept in sync with
//! the integration time.

use std::io::Write;

use crate::chart::{PhaseChart, PhasePoint};
use crate::error::{CoreError, Result};
use crate::observable::Observable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    ImplicitMidpoint,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::ImplicitMidpoint => "implicit_midpoint",
        }
    }
}

/// Time-stamped sequence of phase points plus integrator metadata.
#[derive(Debug, Clone)]
pub struct Trajectory {
    chart: PhaseChart,
    method: Method,
    step: f64,
    samples: Vec<(f64, Vec<f64>)>,
}

impl Trajectory {
    pub fn from_samples(
        chart: PhaseChart,
        method: Method,
        step: f64,
        samples: Vec<(f64, Vec<f64>)>,
    ) -> Self {
        assert!(
            samples.windows(2).all(|w| w[0].0 < w[1].0),
            "sample times must be strictly increasing"
        );
        Trajectory {
            chart,
            method,
            step,
            samples,
        }
    }

    pub fn chart(&self) -> &PhaseChart {
        &self.chart
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.samples[i].0
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        &self.samples[i].1
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.samples.iter().map(|(t, c)| (*t, c.as_slice()))
    }

    pub fn point(&self, i: usize) -> PhasePoint {
        self.chart
            .point(self.samples[i].1.clone())
            .expect("stored states match the chart dimension")
    }

    pub fn last(&self) -> (f64, PhasePoint) {
        let i = self.samples.len() - 1;
        (self.samples[i].0, self.point(i))
    }

    /// CSV with header `t,q1,...,qn,p1,...,pn` at full double precision.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.chart.n_dof();
        write!(w, "t")?;
        for i in 1..=n {
            write!(w, ",q{i}")?;
        }
        for i in 1..=n {
            write!(w, ",p{i}")?;
        }
        writeln!(w)?;
        for (t, c) in &self.samples {
            write!(w, "{}", fmt_g17(*t))?;
            for v in c.iter().take(2 * n) {
                write!(w, ",{}", fmt_g17(*v))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Format with 17 significant digits, enough to round-trip any f64.
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Snap a span/step request to a uniform grid: the number of steps is the
/// nearest integer to `span/step` (at least 1).
pub fn snap_steps(t0: f64, t1: f64, step: f64) -> (usize, f64) {
    let span = t1 - t0;
    let n = ((span / step).round().abs() as usize).max(1);
    (n, span / n as f64)
}

struct HamiltonRhs<'a> {
    h: &'a Observable,
    chart: PhaseChart,
}

impl HamiltonRhs<'_> {
    /// Writes (dq, dp) into `deriv`; returns false on a non-finite value.
    fn eval(&self, t: f64, coords: &mut [f64], deriv: &mut [f64]) -> bool {
        if let Some(ti) = self.chart.t_index() {
            coords[ti] = t;
        }
        let n = self.chart.n_dof();
        for i in 0..n {
            let dq = self.h.partial(self.chart.p_index(i)).eval(coords);
            let dp = -self.h.partial(self.chart.q_index(i)).eval(coords);
            if !dq.is_finite() || !dp.is_finite() {
                return false;
            }
            deriv[self.chart.q_index(i)] = dq;
            deriv[self.chart.p_index(i)] = dp;
        }
        true
    }
}

/// Integrate the flow of the Hamiltonian vector field of `h` from `z0` over
/// `t_span` with the given uniform step.
///
/// On a singularity the last good state is reported inside the error; an
/// implicit stage that fails to converge is reported likewise.
pub fn integrate_hamilton(
    h: &Observable,
    z0: &PhasePoint,
    t_span: (f64, f64),
    step: f64,
    method: Method,
) -> Result<Trajectory> {
    h.check_point(z0)?;
    if !(step > 0.0) {
        return Err(CoreError::InvalidArgument("step must be positive".into()));
    }
    if !(t_span.1 > t_span.0) {
        return Err(CoreError::InvalidArgument(
            "time span must be forward and non-empty".into(),
        ));
    }
    let chart = z0.chart().clone();
    let rhs = HamiltonRhs {
        h,
        chart: chart.clone(),
    };
    let (n_steps, dt) = snap_steps(t_span.0, t_span.1, step);

    let dim = chart.dim();
    let mut state = z0.coords().to_vec();
    if let Some(ti) = chart.t_index() {
        state[ti] = t_span.0;
    }
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push((t_span.0, state.clone()));

    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut work = vec![0.0; dim];

    for k in 0..n_steps {
        let t = t_span.0 + k as f64 * dt;
        let ok = match method {
            Method::Rk4 => rk4_step(&rhs, t, dt, &mut state, &mut k1, &mut k2, &mut k3, &mut k4, &mut work),
            Method::ImplicitMidpoint => midpoint_step(&rhs, t, dt, &mut state, &mut k1, &mut work),
        };
        match ok {
            StepOutcome::Ok => {}
            StepOutcome::Singular => {
                return Err(CoreError::IntegrationHalted {
                    t,
                    last_good: Box::new(Trajectory {
                        chart,
                        method,
                        step: dt,
                        samples,
                    }),
                });
            }
            StepOutcome::NoConvergence(residual) => {
                return Err(CoreError::NonConvergence {
                    iterations: MAX_STAGE_ITERATIONS,
                    residual,
                });
            }
        }
        let t_next = if k + 1 == n_steps {
            t_span.1
        } else {
            t_span.0 + (k + 1) as f64 * dt
        };
        if let Some(ti) = chart.t_index() {
            state[ti] = t_next;
        }
        samples.push((t_next, state.clone()));
    }

    Ok(Trajectory {
        chart,
        method,
        step: dt,
        samples,
    })
}

enum StepOutcome {
    Ok,
    Singular,
    NoConvergence(f64),
}

#[allow(clippy::too_many_arguments)]
fn rk4_step(
    rhs: &HamiltonRhs<'_>,
    t: f64,
    dt: f64,
    state: &mut [f64],
    k1: &mut [f64],
    k2: &mut [f64],
    k3: &mut [f64],
    k4: &mut [f64],
    work: &mut [f64],
) -> StepOutcome {
    let dim = state.len();
    work.copy_from_slice(state);
    if !rhs.eval(t, work, k1) {
        return StepOutcome::Singular;
    }
    for i in 0..dim {
        work[i] = state[i] + 0.5 * dt * k1[i];
    }
    if !rhs.eval(t + 0.5 * dt, work, k2) {
        return StepOutcome::Singular;
    }
    for i in 0..dim {
        work[i] = state[i] + 0.5 * dt * k2[i];
    }
    if !rhs.eval(t + 0.5 * dt, work, k3) {
        return StepOutcome::Singular;
    }
    for i in 0..dim {
        work[i] = state[i] + dt * k3[i];
    }
    if !rhs.eval(t + dt, work, k4) {
        return StepOutcome::Singular;
    }
    for i in 0..dim {
        state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    StepOutcome::Ok
}

pub const MAX_STAGE_ITERATIONS: usize = 50;
const STAGE_TOLERANCE: f64 = 1e-13;
const STAGE_TARGET: f64 = 1e-15;

/// One implicit-midpoint step. The midpoint stage `w = y + (dt/2) f(t+dt/2, w)`
/// is solved by fixed-point iteration; iteration continues below the contract
/// tolerance while it still improves, so stages land at the roundoff floor.
fn midpoint_step(
    rhs: &HamiltonRhs<'_>,
    t: f64,
    dt: f64,
    state: &mut [f64],
    deriv: &mut [f64],
    w: &mut [f64],
) -> StepOutcome {
    let dim = state.len();
    let tm = t + 0.5 * dt;
    // Explicit predictor.
    w.copy_from_slice(state);
    if !rhs.eval(tm, w, deriv) {
        return StepOutcome::Singular;
    }
    for i in 0..dim {
        w[i] = state[i] + 0.5 * dt * deriv[i];
    }
    let mut prev_delta = f64::INFINITY;
    for _ in 0..MAX_STAGE_ITERATIONS {
        if !rhs.eval(tm, w, deriv) {
            return StepOutcome::Singular;
        }
        let mut delta = 0.0_f64;
        for i in 0..dim {
            let next = state[i] + 0.5 * dt * deriv[i];
            delta = delta.max((next - w[i]).abs());
            w[i] = next;
        }
        if delta <= STAGE_TARGET {
            prev_delta = delta;
            break;
        }
        if delta >= prev_delta && delta <= STAGE_TOLERANCE {
            // Stalled at the roundoff floor.
            prev_delta = delta;
            break;
        }
        prev_delta = delta;
    }
    if prev_delta > STAGE_TOLERANCE {
        return StepOutcome::NoConvergence(prev_delta);
    }
    for i in 0..dim {
        state[i] = 2.0 * w[i] - state[i];
    }
    StepOutcome::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::parse_observable;

    #[test]
    fn free_particle_both_methods() {
        let chart = PhaseChart::new(1);
        let h = parse_observable("0.5*p1^2", &chart).unwrap();
        let z0 = chart.point(vec![0.0, 1.0]).unwrap();
        for method in [Method::Rk4, Method::ImplicitMidpoint] {
            let traj = integrate_hamilton(&h, &z0, (0.0, 1.0), 0.1, method).unwrap();
            let (t, zf) = traj.last();
            assert_eq!(t, 1.0);
            assert!((zf.q(0) - 1.0).abs() < 1e-14, "{method:?}");
            assert!((zf.p(0) - 1.0).abs() < 1e-15, "{method:?}");
        }
    }

    #[test]
    fn midpoint_preserves_quadratic_energy() {
        let chart = PhaseChart::new(1);
        let h = parse_observable("0.5*p1^2 + 0.5*q1^2", &chart).unwrap();
        let z0 = chart.point(vec![1.0, 0.0]).unwrap();
        let traj =
            integrate_hamilton(&h, &z0, (0.0, 100.0), 0.1, Method::ImplicitMidpoint).unwrap();
        let e0 = h.eval(traj.coords(0)).unwrap();
        let mut drift = 0.0_f64;
        for (_, c) in traj.samples() {
            drift = drift.max((h.eval(c).unwrap() - e0).abs());
        }
        assert!(drift < 1e-12, "energy drift {drift:.3e}");
    }

    #[test]
    fn singularity_halts_with_last_good_state() {
        let chart = PhaseChart::new(1);
        // dq/dt = -sqrt(q) drives q to the boundary of the domain in finite
        // time; stage evaluations then leave the domain.
        let h = parse_observable("-p1*sqrt(q1)", &chart).unwrap();
        let z0 = chart.point(vec![0.05, 1.0]).unwrap();
        let err = integrate_hamilton(&h, &z0, (0.0, 10.0), 0.1, Method::Rk4).unwrap_err();
        match err {
            CoreError::IntegrationHalted { t, last_good } => {
                assert!(t < 1.0, "halt time {t}");
                assert!(!last_good.is_empty());
                let (t_last, z_last) = last_good.last();
                assert!(t_last <= t);
                assert!(z_last.q(0) > 0.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn stiff_stage_reports_non_convergence() {
        // Fixed-point iteration for the midpoint stage diverges once
        // (step/2) * |df/dz| exceeds 1.
        let chart = PhaseChart::new(1);
        let h = parse_observable("0.5*p1^2 + 500*q1^2", &chart).unwrap();
        let z0 = chart.point(vec![1.0, 0.0]).unwrap();
        let err = integrate_hamilton(&h, &z0, (0.0, 1.0), 0.25, Method::ImplicitMidpoint);
        assert!(matches!(err, Err(CoreError::NonConvergence { .. })));
    }

    #[test]
    fn csv_header_and_shape() {
        let chart = PhaseChart::new(2);
        let h = parse_observable("0.5*(p1^2+p2^2)", &chart).unwrap();
        let z0 = chart.point(vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let traj = integrate_hamilton(&h, &z0, (0.0, 0.2), 0.1, Method::Rk4).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,q1,q2,p1,p2");
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn time_dependent_flow_uses_explicit_time() {
        // H = t*q1 gives dp/dt = -t, so p(T) = p0 - T^2/2.
        let chart = PhaseChart::time_dependent(1);
        let h = parse_observable("t*q1", &chart).unwrap();
        let z0 = chart.point(vec![2.0, 0.3, 0.0]).unwrap();
        let traj = integrate_hamilton(&h, &z0, (0.0, 2.0), 1e-3, Method::Rk4).unwrap();
        let (_, zf) = traj.last();
        assert!((zf.p(0) - (0.3 - 2.0)).abs() < 1e-10);
        // q is untouched: dq/dt = dH/dp = 0.
        assert!((zf.q(0) - 2.0).abs() < 1e-12);
    }
}
