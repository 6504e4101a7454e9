//! Operator-level properties on random inputs: Hermiticity of real affine
//! operators, the Dirac condition at roundoff, commuting actions and norm
//! preservation under diagonal evolution.

use actionangle_quantize::{
    action_operator, dirac_residual, evolve_free, schrodinger_operator, ActionPolynomial,
    AffineObservable, FourierPoly, TorusState,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn random_real_poly(rng: &mut ChaCha20Rng, m: usize, bandwidth: i64) -> FourierPoly {
    let mut items = Vec::new();
    let harmonics = rng.gen_range(1..=3);
    for _ in 0..harmonics {
        let n: Vec<i64> = (0..m).map(|_| rng.gen_range(-bandwidth..=bandwidth)).collect();
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let neg: Vec<i64> = n.iter().map(|v| -v).collect();
        items.push((n, c));
        items.push((neg, c.conj()));
    }
    FourierPoly::from_coeffs(m, items).expect("constructed symmetric")
}

fn random_affine(rng: &mut ChaCha20Rng, m: usize, bandwidth: i64) -> AffineObservable {
    let a: Vec<FourierPoly> = (0..m).map(|_| random_real_poly(rng, m, bandwidth)).collect();
    let b = random_real_poly(rng, m, bandwidth);
    AffineObservable::new(a, b).expect("real by construction")
}

fn random_state(rng: &mut ChaCha20Rng, m: usize, lambda: &[f64]) -> TorusState {
    let mut s = TorusState::zero(m, lambda).unwrap();
    for _ in 0..rng.gen_range(2..6) {
        let n: Vec<i64> = (0..m).map(|_| rng.gen_range(-4..=4)).collect();
        s.add_mode(&n, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .unwrap();
    }
    s
}

#[test]
fn hermiticity_of_real_affine_operators() {
    let mut rng = ChaCha20Rng::seed_from_u64(404);
    for trial in 0..50 {
        let m = 1 + (trial % 2);
        let lambda: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
        let f = random_affine(&mut rng, m, 3);
        let psi = random_state(&mut rng, m, &lambda);
        let chi = random_state(&mut rng, m, &lambda);
        let f_psi = schrodinger_operator(&f, &psi).unwrap();
        let f_chi = schrodinger_operator(&f, &chi).unwrap();
        let lhs = f_psi.inner(&chi);
        let rhs = psi.inner(&f_chi);
        let scale = 1.0 + lhs.norm();
        assert!(
            (lhs - rhs).norm() < 1e-13 * scale,
            "Hermiticity defect {:.3e} (m = {m})",
            (lhs - rhs).norm()
        );
    }
}

#[test]
fn dirac_condition_on_random_affine_pairs() {
    let mut rng = ChaCha20Rng::seed_from_u64(505);
    for trial in 0..50 {
        let m = 1 + (trial % 2);
        let lambda: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
        let f = random_affine(&mut rng, m, 5);
        let g = random_affine(&mut rng, m, 5);
        let raw = random_state(&mut rng, m, &lambda);
        let probe = raw.scale(Complex64::new(1.0 / raw.norm_sq().sqrt(), 0.0));
        let r = dirac_residual(&f, &g, &probe).unwrap();
        assert!(r < 1e-13, "Dirac residual {r:.3e} (m = {m})");
    }
}

#[test]
fn action_operators_commute_exactly() {
    let mut rng = ChaCha20Rng::seed_from_u64(606);
    let lambda = [0.3, 0.7];
    for _ in 0..20 {
        let psi = random_state(&mut rng, 2, &lambda);
        let ab = action_operator(0, &action_operator(1, &psi).unwrap()).unwrap();
        let ba = action_operator(1, &action_operator(0, &psi).unwrap()).unwrap();
        let diff = ab.sub(&ba).unwrap();
        // Both orders scale each mode by the same two factors; any deviation
        // is at the level of one rounding of the scalar product.
        assert!(diff.norm_sq() <= 1e-30 * (1.0 + psi.norm_sq()));
    }
}

#[test]
fn diagonal_evolution_preserves_the_norm() {
    let mut rng = ChaCha20Rng::seed_from_u64(707);
    let h = ActionPolynomial::parse("I1^2 + 0.5*I1", 1).unwrap();
    for _ in 0..20 {
        let psi = random_state(&mut rng, 1, &[0.25]);
        let evolved = evolve_free(&psi, &h, rng.gen_range(0.0..10.0)).unwrap();
        assert!(
            (evolved.norm_sq() - psi.norm_sq()).abs() < 1e-14 * (1.0 + psi.norm_sq()),
            "norm drift"
        );
    }
}

#[test]
fn free_evolution_solves_the_mode_equation() {
    // Each mode of the evolved state carries exp[-i t H(n + lambda)]; the
    // evolved state therefore solves i d(psi)/dt = H psi checked by a small
    // time difference.
    let h = ActionPolynomial::parse("I1^2", 1).unwrap();
    let lambda = [0.5];
    let mut psi = TorusState::zero(1, &lambda).unwrap();
    psi.add_mode(&[1], Complex64::new(0.8, 0.0)).unwrap();
    psi.add_mode(&[-3], Complex64::new(0.0, 0.6)).unwrap();

    let t = 0.37;
    let evolved = evolve_free(&psi, &h, t).unwrap();
    for (freq, amp0) in psi.modes() {
        let shifted = freq[0] + lambda[0];
        let expected = amp0 * Complex64::new(0.0, -t * shifted * shifted).exp();
        let n = [freq[0] as i64];
        assert!((evolved.amp(&n) - expected).norm() < 1e-15);
    }
}
