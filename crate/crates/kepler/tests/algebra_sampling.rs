//! Sampled verification of the bracket algebra and Casimir identities in
//! both regimes, analytic brackets throughout.

use actionangle_kepler::{
    classify_region, kepler_observables, to_action_angle, verify_algebra, KeplerCatalog, Regime,
    DEFAULT_REGIME_TOL,
};
use actionangle_core::PhasePoint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Rejection-sample a point of the requested regime with a margin keeping
/// |H| and |M12| away from zero, so identity magnitudes stay O(1).
fn sample_regime(cat: &KeplerCatalog, rng: &mut ChaCha20Rng, want: Regime) -> PhasePoint {
    loop {
        let r = rng.gen_range(0.3..3.0);
        let th = rng.gen_range(0.0..std::f64::consts::TAU);
        let pm = rng.gen_range(0.0..2.5);
        let ph = rng.gen_range(0.0..std::f64::consts::TAU);
        let coords = vec![
            r * th.cos(),
            r * th.sin(),
            pm * ph.cos(),
            pm * ph.sin(),
        ];
        let z = cat.chart.point(coords).unwrap();
        let h = cat.h.eval_at(&z).unwrap();
        let m = cat.m12.eval_at(&z).unwrap();
        if h.abs() < 0.2 || m.abs() < 0.2 {
            continue;
        }
        if classify_region(cat, &z, DEFAULT_REGIME_TOL).unwrap() == want {
            return z;
        }
    }
}

#[test]
fn bound_regime_relations_hold_at_sampled_points() {
    let cat = kepler_observables();
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    for _ in 0..100 {
        let z = sample_regime(&cat, &mut rng, Regime::UMinus);
        let res = verify_algebra(&cat, &z, DEFAULT_REGIME_TOL).unwrap();
        assert_eq!(res.regime, Regime::UMinus);
        assert!(res.max() < 1e-12, "residual {:.3e} at {:?}", res.max(), z.coords());
    }
}

#[test]
fn unbound_regime_relations_hold_at_sampled_points() {
    let cat = kepler_observables();
    let mut rng = ChaCha20Rng::seed_from_u64(202);
    for _ in 0..100 {
        let z = sample_regime(&cat, &mut rng, Regime::UPlus);
        let res = verify_algebra(&cat, &z, DEFAULT_REGIME_TOL).unwrap();
        assert_eq!(res.regime, Regime::UPlus);
        assert!(res.max() < 1e-12, "residual {:.3e} at {:?}", res.max(), z.coords());
    }
}

#[test]
fn action_equals_energy_in_both_regimes() {
    let cat = kepler_observables();
    let mut rng = ChaCha20Rng::seed_from_u64(303);
    for want in [Regime::UMinus, Regime::UPlus] {
        let mut checked = 0;
        while checked < 50 {
            let z = sample_regime(&cat, &mut rng, want);
            match to_action_angle(&cat, &z, DEFAULT_REGIME_TOL) {
                Ok(s) => {
                    let h = cat.h.eval_at(&z).unwrap();
                    assert!(
                        (s.action - h).abs() < 1e-12 * (1.0 + h.abs()),
                        "I = {} vs H = {h}",
                        s.action
                    );
                    checked += 1;
                }
                // The unbound angle chart covers only part of its regime.
                Err(actionangle_kepler::KeplerError::ChartBoundary(_)) => continue,
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }
}
