//! Random inputs shared by the verification commands and the acceptance
//! suite.

use actionangle_quantize::{ActionPolynomial, AffineObservable, FourierPoly, TorusState};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

pub fn random_affine(rng: &mut ChaCha20Rng, m: usize, bandwidth: i64) -> AffineObservable {
    let poly = |rng: &mut ChaCha20Rng| {
        let mut items = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let n: Vec<i64> = (0..m)
                .map(|_| rng.gen_range(-bandwidth..=bandwidth))
                .collect();
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let neg: Vec<i64> = n.iter().map(|v| -v).collect();
            items.push((n, c));
            items.push((neg, c.conj()));
        }
        FourierPoly::from_coeffs(m, items).expect("symmetric by construction")
    };
    let a: Vec<FourierPoly> = (0..m).map(|_| poly(rng)).collect();
    let b = poly(rng);
    AffineObservable::new(a, b).expect("real by construction")
}

pub fn random_state(rng: &mut ChaCha20Rng, m: usize, lambda: &[f64]) -> TorusState {
    let mut s = TorusState::zero(m, lambda).expect("shape");
    for _ in 0..rng.gen_range(2..6) {
        let n: Vec<i64> = (0..m).map(|_| rng.gen_range(-4..=4)).collect();
        s.add_mode(
            &n,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )
        .expect("shape");
    }
    if s.norm_sq() == 0.0 {
        s.add_mode(&vec![0; m], Complex64::new(1.0, 0.0))
            .expect("shape");
    }
    s
}

/// Convenience used by the holonomy suite.
pub fn quadratic_action_hamiltonian() -> ActionPolynomial {
    ActionPolynomial::parse("I1^2 + 0.25*I1", 1).expect("fixed polynomial parses")
}
