//! Drift reports for candidate integrals of motion along a trajectory.

use crate::error::Result;
use crate::integrate::Trajectory;
use crate::observable::Observable;

#[derive(Debug, Clone)]
pub struct ConservationReport {
    /// Max |H(z(t)) - H(z(t0))| for the generating Hamiltonian.
    pub hamiltonian_drift: f64,
    /// Initial values F(z(t0)).
    pub initial: Vec<f64>,
    /// Max |F(z(t)) - F(z(t0))| per observable, in input order.
    pub drifts: Vec<f64>,
}

/// Evaluate each observable along the trajectory and report the maximum
/// excursion from its initial value. An integral of motion drifts at the
/// integrator's order; anything else drifts secularly.
pub fn conservation_report(
    h: &Observable,
    fs: &[Observable],
    traj: &Trajectory,
) -> Result<ConservationReport> {
    let first = traj.coords(0);
    let h0 = h.eval(first)?;
    let initial: Vec<f64> = fs
        .iter()
        .map(|f| f.eval(first))
        .collect::<Result<_>>()?;
    let mut hamiltonian_drift = 0.0_f64;
    let mut drifts = vec![0.0_f64; fs.len()];
    for (_, coords) in traj.samples() {
        hamiltonian_drift = hamiltonian_drift.max((h.eval(coords)? - h0).abs());
        for (k, f) in fs.iter().enumerate() {
            drifts[k] = drifts[k].max((f.eval(coords)? - initial[k]).abs());
        }
    }
    Ok(ConservationReport {
        hamiltonian_drift,
        initial,
        drifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::PhaseChart;
    use crate::integrate::{integrate_hamilton, Method};
    use crate::observable::parse_observable;

    #[test]
    fn quadratic_invariant_is_exact_for_midpoint() {
        let chart = PhaseChart::new(1);
        let h = parse_observable("0.5*p1^2 + 0.5*q1^2", &chart).unwrap();
        let z0 = chart.point(vec![1.0, 0.0]).unwrap();
        let traj =
            integrate_hamilton(&h, &z0, (0.0, 100.0), 0.1, Method::ImplicitMidpoint).unwrap();
        let report = conservation_report(&h, std::slice::from_ref(&h), &traj).unwrap();
        assert!(report.hamiltonian_drift < 1e-12);
        assert!(report.drifts[0] < 1e-12);
    }

    #[test]
    fn coordinate_drifts_linearly_for_free_particle() {
        let chart = PhaseChart::new(1);
        let h = parse_observable("0.5*p1^2", &chart).unwrap();
        let q1 = parse_observable("q1", &chart).unwrap();
        let z0 = chart.point(vec![0.0, 2.0]).unwrap();
        let traj = integrate_hamilton(&h, &z0, (0.0, 3.0), 0.1, Method::Rk4).unwrap();
        let report = conservation_report(&h, &[q1], &traj).unwrap();
        // q drifts by |t1 - t0| * p1, not conserved.
        assert!((report.drifts[0] - 6.0).abs() < 1e-12);
    }
}
