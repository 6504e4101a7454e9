//! Mode-exact operators on torus states.
//!
//! The affine function `f = a^k(phi) I_k + b(phi)` acts as
//! `f_hat = -i a^k d_k - (i/2) (d_k a^k) + a^k lambda_k - b`,
//! realized exactly in mode space: the image of a finite-support state has
//! finite support, grown by the coefficient bandwidth. Note the scalar part
//! enters with a minus sign; this is what makes the Dirac condition
//! `[f_hat, g_hat] = -i {f,g}_hat` hold sign-exactly.

use num_complex::Complex64;

use crate::affine::AffineObservable;
use crate::error::{QuantizeError, Result};
use crate::poly::ActionPolynomial;
use crate::state::TorusState;

/// The action operator `I_k^hat`: mode `n` scales by `(n_k + lambda_k)`.
pub fn action_operator(k: usize, state: &TorusState) -> Result<TorusState> {
    if k >= state.m() {
        return Err(QuantizeError::IndexOutOfRange {
            index: k,
            m: state.m(),
        });
    }
    let lambda_k = state.lambda()[k];
    let mut out = state.like();
    for (key, amp) in state.keys() {
        let nu_k = key[k] as f64 / 2.0;
        out.add_key(key.clone(), amp * (nu_k + lambda_k));
    }
    Ok(out)
}

/// Apply the Schrodinger operator of an affine observable.
pub fn schrodinger_operator(f: &AffineObservable, state: &TorusState) -> Result<TorusState> {
    if f.m() != state.m() {
        return Err(QuantizeError::DimensionMismatch {
            want: state.m(),
            got: f.m(),
        });
    }
    let m = state.m();
    let lambda = state.lambda().to_vec();
    let mut out = state.like();
    for (key, amp) in state.keys() {
        // Action terms: for each harmonic mu of a^k the mode shifts by mu and
        // picks up a^k_mu (nu_k + mu_k/2 + lambda_k).
        for k in 0..m {
            for (mu, c_mu) in f.action_coefficient(k).coeffs() {
                let nu_k = key[k] as f64 / 2.0;
                let weight = nu_k + mu[k] as f64 / 2.0 + lambda[k];
                let shifted: Vec<i64> = key.iter().zip(mu).map(|(v, u)| v + 2 * u).collect();
                out.add_key(shifted, amp * c_mu * weight);
            }
        }
        // Scalar part enters negated.
        for (mu, b_mu) in f.scalar_part().coeffs() {
            let shifted: Vec<i64> = key.iter().zip(mu).map(|(v, u)| v + 2 * u).collect();
            out.add_key(shifted, -amp * b_mu);
        }
    }
    Ok(out)
}

/// Norm of `([f_hat, g_hat] + i {f,g}_hat) probe`; zero up to roundoff for
/// affine observables, with no truncation error.
pub fn dirac_residual(
    f: &AffineObservable,
    g: &AffineObservable,
    probe: &TorusState,
) -> Result<f64> {
    let fg = schrodinger_operator(f, &schrodinger_operator(g, probe)?)?;
    let gf = schrodinger_operator(g, &schrodinger_operator(f, probe)?)?;
    let bracket = f.poisson_bracket(g)?;
    let bracket_probe = schrodinger_operator(&bracket, probe)?;
    let residual = fg
        .sub(&gf)?
        .add(&bracket_probe.scale(Complex64::new(0.0, 1.0)))?;
    Ok(residual.norm_sq().sqrt())
}

/// Diagonal evolution: multiply mode `n` by `exp[-i t H(n + lambda)]`.
pub fn evolve_free(state: &TorusState, h: &ActionPolynomial, t: f64) -> Result<TorusState> {
    if h.m() != state.m() {
        return Err(QuantizeError::DimensionMismatch {
            want: state.m(),
            got: h.m(),
        });
    }
    Ok(state.map_phases(|shifted| {
        let e = h.eval(shifted);
        Complex64::new(0.0, -t * e).exp()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::FourierPoly;

    fn basis1(n: i64) -> TorusState {
        TorusState::basis(1, &[0.0], &[n]).unwrap()
    }

    #[test]
    fn action_eigenmode() {
        let psi = basis1(3);
        let out = action_operator(0, &psi).unwrap();
        assert_eq!(out.amp(&[3]), Complex64::new(3.0, 0.0));
        assert_eq!(out.support_len(), 1);
    }

    #[test]
    fn action_with_offset() {
        let psi = TorusState::basis(1, &[0.5], &[0]).unwrap();
        let out = action_operator(0, &psi).unwrap();
        assert_eq!(out.amp(&[0]), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn action_linearity() {
        let psi = basis1(1).add(&basis1(2)).unwrap();
        let out = action_operator(0, &psi).unwrap();
        assert_eq!(out.amp(&[1]), Complex64::new(1.0, 0.0));
        assert_eq!(out.amp(&[2]), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn constant_action_coefficient_reduces_to_action() {
        let f = AffineObservable::action(1, 0).unwrap();
        let psi = basis1(4);
        let via_f = schrodinger_operator(&f, &psi).unwrap();
        let via_i = action_operator(0, &psi).unwrap();
        assert_eq!(via_f, via_i);
    }

    #[test]
    fn sine_scalar_shifts_modes() {
        // f = sin(phi) acts as (i/2)(psi_{n+1} - psi_{n-1}).
        let f = AffineObservable::scalar(FourierPoly::sin_angle(1, 0).unwrap()).unwrap();
        let psi = basis1(2);
        let out = schrodinger_operator(&f, &psi).unwrap();
        assert_eq!(out.amp(&[3]), Complex64::new(0.0, 0.5));
        assert_eq!(out.amp(&[1]), Complex64::new(0.0, -0.5));
    }

    #[test]
    fn dirac_residual_for_action_and_sine() {
        let f = AffineObservable::action(1, 0).unwrap();
        let g = AffineObservable::scalar(FourierPoly::sin_angle(1, 0).unwrap()).unwrap();
        for n in [-2i64, 0, 5] {
            let probe = basis1(n);
            let r = dirac_residual(&f, &g, &probe).unwrap();
            assert!(r < 1e-14, "residual {r:.3e} at mode {n}");
        }
    }

    #[test]
    fn dirac_residual_vanishes_for_equal_arguments() {
        let f = AffineObservable::scalar(FourierPoly::cos_angle(1, 0).unwrap()).unwrap();
        let probe = basis1(1);
        assert_eq!(dirac_residual(&f, &f, &probe).unwrap(), 0.0);
    }

    #[test]
    fn commuting_actions_have_zero_residual() {
        let f = AffineObservable::action(2, 0).unwrap();
        let g = AffineObservable::action(2, 1).unwrap();
        let probe = TorusState::basis(2, &[0.0, 0.0], &[1, -2]).unwrap();
        assert_eq!(dirac_residual(&f, &g, &probe).unwrap(), 0.0);
    }
}
