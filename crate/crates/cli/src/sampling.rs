//! Deterministic phase-space samplers for batch verification.
//!
//! Points are drawn with q uniform in the annulus r in [0.3, 3] and p
//! uniform in the ball |p| <= 2.5, resampled until the requested regime is
//! hit. A margin keeps |H| and |M12| away from zero so that identities
//! involving 1/(2H) stay at O(1) magnitudes and absolute residual thresholds
//! are meaningful.

use actionangle_core::PhasePoint;
use actionangle_kepler::{classify_region, KeplerCatalog, Regime, DEFAULT_REGIME_TOL};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const SAMPLING_MARGIN: f64 = 0.2;

pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn sample_point(cat: &KeplerCatalog, rng: &mut ChaCha20Rng) -> PhasePoint {
    loop {
        let r = rng.gen_range(0.3..3.0);
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let pm: f64 = rng.gen_range(0.0..1.0);
        let pm = 2.5 * pm.sqrt();
        let ph = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = cat
            .chart
            .point(vec![r * th.cos(), r * th.sin(), pm * ph.cos(), pm * ph.sin()])
            .expect("chart dimension");
        let h = cat.h.eval_at(&z).expect("non-singular by construction");
        let m = cat.m12.eval_at(&z).expect("non-singular by construction");
        if h.abs() < SAMPLING_MARGIN || m.abs() < SAMPLING_MARGIN {
            continue;
        }
        if classify_region(cat, &z, DEFAULT_REGIME_TOL).expect("r > 0") != Regime::Excluded {
            return z;
        }
    }
}

pub fn sample_regime(cat: &KeplerCatalog, rng: &mut ChaCha20Rng, want: Regime) -> PhasePoint {
    loop {
        let z = sample_point(cat, rng);
        if classify_region(cat, &z, DEFAULT_REGIME_TOL).expect("r > 0") == want {
            return z;
        }
    }
}

pub fn sample_points(cat: &KeplerCatalog, seed: u64, count: usize) -> Vec<PhasePoint> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| sample_point(cat, &mut rng)).collect()
}

pub fn sample_regime_points(
    cat: &KeplerCatalog,
    seed: u64,
    count: usize,
    want: Regime,
) -> Vec<PhasePoint> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| sample_regime(cat, &mut rng, want))
        .collect()
}
