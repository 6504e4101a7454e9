//! Integrator accuracy on the bound two-body orbit: endpoint closure after
//! one period and the nominal convergence orders of both methods.

mod common;

use actionangle_core::{integrate_hamilton, Method};
use common::*;

const TAU: f64 = std::f64::consts::TAU;

fn endpoint_error(step: f64, method: Method) -> f64 {
    let chart = chart2();
    let h = obs(&chart, KEPLER_H);
    // a = 1, e = 0.5 orbit from perihelion; period 2*pi.
    let z0 = chart.point(vec![0.5, 0.0, 0.0, 3.0_f64.sqrt()]).unwrap();
    let traj = integrate_hamilton(&h, &z0, (0.0, TAU), step, method).unwrap();
    let (_, zf) = traj.last();
    let mut err = 0.0_f64;
    for i in 0..4 {
        err = err.max((zf.coords()[i] - z0.coords()[i]).abs());
    }
    err
}

fn log_log_slope(steps: &[f64], errors: &[f64]) -> f64 {
    let n = steps.len() as f64;
    let xs: Vec<f64> = steps.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

#[test]
fn circular_orbit_closes_after_one_period() {
    let chart = chart2();
    let h = obs(&chart, KEPLER_H);
    let z0 = chart.point(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
    let traj = integrate_hamilton(&h, &z0, (0.0, TAU), 1e-3, Method::Rk4).unwrap();
    let (_, zf) = traj.last();
    for i in 0..4 {
        assert!(
            (zf.coords()[i] - z0.coords()[i]).abs() < 1e-6,
            "coordinate {i} missed closure"
        );
    }
}

#[test]
fn rk4_is_fourth_order_on_the_bound_orbit() {
    let steps = [TAU / 1000.0, TAU / 2000.0, TAU / 4000.0];
    let errors: Vec<f64> = steps
        .iter()
        .map(|s| endpoint_error(*s, Method::Rk4))
        .collect();
    let slope = log_log_slope(&steps, &errors);
    assert!(
        (slope - 4.0).abs() < 0.3,
        "rk4 slope {slope:.3} (errors {errors:?})"
    );
}

#[test]
fn implicit_midpoint_is_second_order_on_the_bound_orbit() {
    let steps = [TAU / 2000.0, TAU / 4000.0, TAU / 8000.0];
    let errors: Vec<f64> = steps
        .iter()
        .map(|s| endpoint_error(*s, Method::ImplicitMidpoint))
        .collect();
    let slope = log_log_slope(&steps, &errors);
    assert!(
        (slope - 2.0).abs() < 0.3,
        "midpoint slope {slope:.3} (errors {errors:?})"
    );
}
