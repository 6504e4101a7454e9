//! Orbit integration helpers: period measurement against the third-law
//! prediction and orbit scans carrying the chart functions along.

use std::io::Write;

use actionangle_core::{fmt_g17, integrate_hamilton, Method, PhasePoint, Trajectory};

use crate::catalog::KeplerCatalog;
use crate::chart::{to_action_angle, ActionAngleState};
use crate::error::{KeplerError, Result};
use crate::regime::{classify_region, Regime};

const TAU: f64 = std::f64::consts::TAU;

/// Perihelion state of the bound orbit with the given elements: the body
/// sits at `q = (a(1-e), 0)` moving in `+q2` with speed from the vis-viva
/// relation.
pub fn perihelion_state(cat: &KeplerCatalog, a: f64, e: f64) -> Result<PhasePoint> {
    assert!(a > 0.0 && (0.0..1.0).contains(&e));
    let rp = a * (1.0 - e);
    // Vis-viva at perihelion: v^2 = 2(-1/(2a) + 1/rp) = (1+e)/(a(1-e)).
    let speed = ((1.0 + e) / (a * (1.0 - e))).sqrt();
    Ok(cat.chart.point(vec![rp, 0.0, 0.0, speed])?)
}

#[derive(Debug, Clone, Copy)]
pub struct PeriodCheck {
    /// Third-law prediction `2 pi a^{3/2}`.
    pub predicted: f64,
    /// First return time measured from the integrated flow.
    pub measured: f64,
}

impl PeriodCheck {
    pub fn deviation(&self) -> f64 {
        (self.predicted - self.measured).abs()
    }
}

/// Integrate the orbit through `z` and measure the first return to within
/// `delta` of the initial state; the raw grid minimum is sharpened by a
/// parabolic fit of the squared distance.
pub fn orbit_period_check(
    cat: &KeplerCatalog,
    z: &PhasePoint,
    eps_reg: f64,
    step: f64,
    delta: f64,
) -> Result<PeriodCheck> {
    let regime = classify_region(cat, z, eps_reg)?;
    match regime {
        Regime::UMinus => {}
        Regime::UPlus => return Err(KeplerError::NoPeriod),
        Regime::Excluded => return Err(KeplerError::ExcludedRegime),
    }
    let state = to_action_angle(cat, z, eps_reg)?;
    let predicted = TAU * state.semi_axis.powf(1.5);

    let traj = integrate_hamilton(&cat.h, z, (0.0, 1.25 * predicted), step, Method::Rk4)?;
    let d2 = |coords: &[f64]| -> f64 {
        coords
            .iter()
            .zip(z.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    };
    let mut best: Option<(usize, f64)> = None;
    for i in 1..traj.len() - 1 {
        if traj.time(i) < 0.5 * predicted {
            continue;
        }
        let (dm, d0, dp) = (d2(traj.coords(i - 1)), d2(traj.coords(i)), d2(traj.coords(i + 1)));
        if d0 <= dm && d0 <= dp && d0.sqrt() < delta {
            best = Some((i, d0));
            break;
        }
    }
    let (i, _) = best.ok_or(KeplerError::NoReturn)?;
    // Parabola through the three bracketing samples of the squared distance.
    let (tm, t0) = (traj.time(i - 1), traj.time(i));
    let (ym, y0, yp) = (d2(traj.coords(i - 1)), d2(traj.coords(i)), d2(traj.coords(i + 1)));
    let h = t0 - tm;
    let denom = ym - 2.0 * y0 + yp;
    let measured = if denom.abs() < f64::MIN_POSITIVE {
        t0
    } else {
        t0 + 0.5 * h * (ym - yp) / denom
    };
    Ok(PeriodCheck {
        predicted,
        measured,
    })
}

/// A trajectory with the chart functions evaluated at every sample.
#[derive(Debug, Clone)]
pub struct OrbitScan {
    pub trajectory: Trajectory,
    pub states: Vec<ActionAngleState>,
}

pub fn orbit_scan(
    cat: &KeplerCatalog,
    z0: &PhasePoint,
    t_end: f64,
    step: f64,
    eps_reg: f64,
) -> Result<OrbitScan> {
    let trajectory = integrate_hamilton(&cat.h, z0, (0.0, t_end), step, Method::Rk4)?;
    let mut states = Vec::with_capacity(trajectory.len());
    for i in 0..trajectory.len() {
        states.push(to_action_angle(cat, &trajectory.point(i), eps_reg)?);
    }
    Ok(OrbitScan { trajectory, states })
}

impl OrbitScan {
    /// Core trajectory CSV with the chart columns appended:
    /// `t,q1,q2,p1,p2,I,x1,gamma,alpha`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "t")?;
        for i in 1..=2 {
            write!(w, ",q{i}")?;
        }
        for i in 1..=2 {
            write!(w, ",p{i}")?;
        }
        writeln!(w, ",I,x1,gamma,alpha")?;
        for (i, (t, c)) in self.trajectory.samples().enumerate() {
            let s = &self.states[i];
            write!(w, "{}", fmt_g17(t))?;
            for v in c.iter().take(4) {
                write!(w, ",{}", fmt_g17(*v))?;
            }
            writeln!(
                w,
                ",{},{},{},{}",
                fmt_g17(s.action),
                fmt_g17(s.x1),
                fmt_g17(s.angle),
                fmt_g17(s.time_angle)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::kepler_observables;
    use crate::regime::DEFAULT_REGIME_TOL;

    #[test]
    fn circular_period_is_two_pi() {
        let cat = kepler_observables();
        let z = cat.chart.point(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let check = orbit_period_check(&cat, &z, DEFAULT_REGIME_TOL, 1e-3, 1e-2).unwrap();
        assert!((check.predicted - TAU).abs() < 1e-12);
        assert!(check.deviation() < 1e-5, "deviation {:.3e}", check.deviation());
    }

    #[test]
    fn unbound_orbit_has_no_period() {
        let cat = kepler_observables();
        let z = cat.chart.point(vec![1.0, 0.0, 0.0, 2.0]).unwrap();
        assert!(matches!(
            orbit_period_check(&cat, &z, DEFAULT_REGIME_TOL, 1e-3, 1e-2),
            Err(KeplerError::NoPeriod)
        ));
    }

    #[test]
    fn perihelion_state_has_requested_elements() {
        let cat = kepler_observables();
        let z = perihelion_state(&cat, 1.0, 0.5).unwrap();
        let s = to_action_angle(&cat, &z, DEFAULT_REGIME_TOL).unwrap();
        assert!((s.semi_axis - 1.0).abs() < 1e-12);
        assert!((s.eccentricity - 0.5).abs() < 1e-12);
        assert!((s.action + 0.5).abs() < 1e-12);
    }

    #[test]
    fn scan_csv_has_chart_columns() {
        let cat = kepler_observables();
        let z = perihelion_state(&cat, 1.0, 0.3).unwrap();
        let scan = orbit_scan(&cat, &z, 0.5, 0.1, DEFAULT_REGIME_TOL).unwrap();
        let mut buf = Vec::new();
        scan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,q1,q2,p1,p2,I,x1,gamma,alpha\n"));
        assert_eq!(text.lines().count(), scan.trajectory.len() + 1);
    }
}
