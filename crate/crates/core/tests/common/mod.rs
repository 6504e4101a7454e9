//! Shared fixtures for the integration tests: the planar two-body catalog
//! written in the expression language, plus a deterministic point sampler.
//! Each test binary uses its own subset.
#![allow(dead_code)]

use actionangle_core::{parse_observable, Observable, PhaseChart, PhasePoint};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const KEPLER_H: &str = "0.5*(p1^2+p2^2) - 1/(q1^2+q2^2)^0.5";
pub const KEPLER_M12: &str = "q1*p2 - q2*p1";
pub const KEPLER_A1: &str = "q1*(p1^2+p2^2) - p1*(p1*q1+p2*q2) - q1/(q1^2+q2^2)^0.5";
pub const KEPLER_A2: &str = "q2*(p1^2+p2^2) - p2*(p1*q1+p2*q2) - q2/(q1^2+q2^2)^0.5";

pub fn chart2() -> PhaseChart {
    PhaseChart::new(2)
}

pub fn obs(chart: &PhaseChart, text: &str) -> Observable {
    parse_observable(text, chart).unwrap()
}

/// The generic bound-orbit test point used throughout: q=(1,0.5), p=(-0.3,1).
pub fn generic_point(chart: &PhaseChart) -> PhasePoint {
    chart.point(vec![1.0, 0.5, -0.3, 1.0]).unwrap()
}

/// Sample points in the annulus r in [0.5, 2.5], |p| <= 2, away from the
/// excluded sets (used where formulas divide by H or M12).
pub fn sample_points(chart: &PhaseChart, count: usize, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = rng.gen_range(0.5..2.5);
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let pr = rng.gen_range(0.0..2.0);
        let ph = rng.gen_range(0.0..std::f64::consts::TAU);
        let q1 = r * th.cos();
        let q2 = r * th.sin();
        let p1 = pr * ph.cos();
        let p2 = pr * ph.sin();
        let h = 0.5 * (p1 * p1 + p2 * p2) - 1.0 / r;
        let m = q1 * p2 - q2 * p1;
        if h.abs() < 0.2 || m.abs() < 0.2 {
            continue;
        }
        out.push(chart.point(vec![q1, q2, p1, p2]).unwrap());
    }
    out
}
