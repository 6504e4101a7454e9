//! Spectra of polynomial Hamiltonians of the actions on the Fourier basis.

use std::io::Write;

use actionangle_core::fmt_g17;

use crate::error::{QuantizeError, Result};
use crate::poly::ActionPolynomial;

/// Inclusive per-dimension mode ranges.
pub type ModeBox = Vec<(i64, i64)>;

/// Eigenvalues `E_n = H(n_1 + lambda_1, ..., n_m + lambda_m)` for every mode
/// in the box; eigenvectors are the Fourier basis states. Rows are sorted
/// lexicographically in `n`.
pub fn spectrum(
    h: &ActionPolynomial,
    lambda: &[f64],
    mode_box: &ModeBox,
) -> Result<Vec<(Vec<i64>, f64)>> {
    let m = h.m();
    if lambda.len() != m || mode_box.len() != m {
        return Err(QuantizeError::DimensionMismatch {
            want: m,
            got: lambda.len().max(mode_box.len()),
        });
    }
    if mode_box.iter().any(|(lo, hi)| lo > hi) {
        return Err(QuantizeError::EmptyBox);
    }
    let mut out = Vec::new();
    let mut n: Vec<i64> = mode_box.iter().map(|(lo, _)| *lo).collect();
    'outer: loop {
        let shifted: Vec<f64> = n
            .iter()
            .zip(lambda)
            .map(|(k, l)| *k as f64 + l)
            .collect();
        out.push((n.clone(), h.eval(&shifted)));
        // Odometer increment over the box.
        for d in (0..m).rev() {
            if n[d] < mode_box[d].1 {
                n[d] += 1;
                for (slot, (lo, _)) in n.iter_mut().zip(mode_box).skip(d + 1) {
                    *slot = *lo;
                }
                continue 'outer;
            }
        }
        break;
    }
    Ok(out)
}

/// The worked bound-region example: the chart Hamiltonian is the action
/// itself and the example's operator convention shifts by `-lambda`, giving
/// `E_k = k - lambda`. This is the flagged sign variant; `spectrum` with the
/// `+lambda` convention is the primary path.
pub fn kepler_quantum_example(lambda: f64, k_range: (i64, i64)) -> Result<Vec<(i64, f64)>> {
    if k_range.0 > k_range.1 {
        return Err(QuantizeError::EmptyBox);
    }
    Ok((k_range.0..=k_range.1)
        .map(|k| (k, k as f64 - lambda))
        .collect())
}

/// CSV `n1,...,nm,E`.
pub fn write_spectrum_csv<W: Write>(rows: &[(Vec<i64>, f64)], m: usize, mut w: W) -> std::io::Result<()> {
    for i in 1..=m {
        write!(w, "n{i},")?;
    }
    writeln!(w, "E")?;
    for (n, e) in rows {
        for v in n {
            write!(w, "{v},")?;
        }
        writeln!(w, "{}", fmt_g17(*e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_spectrum() {
        let h = ActionPolynomial::parse("I1^2", 1).unwrap();
        let rows = spectrum(&h, &[0.0], &vec![(-2, 2)]).unwrap();
        let energies: Vec<f64> = rows.iter().map(|(_, e)| *e).collect();
        assert_eq!(energies, vec![4.0, 1.0, 0.0, 1.0, 4.0]);
    }

    #[test]
    fn linear_spectrum_with_offset() {
        let h = ActionPolynomial::parse("I1", 1).unwrap();
        let rows = spectrum(&h, &[0.5], &vec![(0, 3)]).unwrap();
        for (n, e) in rows {
            assert_eq!(e, n[0] as f64 + 0.5);
        }
    }

    #[test]
    fn two_dimensional_box_order() {
        let h = ActionPolynomial::parse("I1 + 10*I2", 2).unwrap();
        let rows = spectrum(&h, &[0.0, 0.0], &vec![(0, 1), (-1, 0)]).unwrap();
        let ns: Vec<Vec<i64>> = rows.iter().map(|(n, _)| n.clone()).collect();
        assert_eq!(
            ns,
            vec![vec![0, -1], vec![0, 0], vec![1, -1], vec![1, 0]]
        );
    }

    #[test]
    fn example_flagged_variant_matches_primary_at_zero_offset() {
        let variant = kepler_quantum_example(0.0, (-2, 2)).unwrap();
        let h = ActionPolynomial::parse("I1", 1).unwrap();
        let primary = spectrum(&h, &[0.0], &vec![(-2, 2)]).unwrap();
        for ((k, e), (n, e2)) in variant.iter().zip(&primary) {
            assert_eq!(*k, n[0]);
            assert_eq!(e, e2);
        }
    }

    #[test]
    fn example_offset_value() {
        let rows = kepler_quantum_example(0.25, (2, 2)).unwrap();
        assert_eq!(rows[0], (2, 1.75));
    }

    #[test]
    fn empty_box_is_an_error() {
        let h = ActionPolynomial::parse("I1", 1).unwrap();
        assert!(matches!(
            spectrum(&h, &[0.0], &vec![(1, 0)]),
            Err(QuantizeError::EmptyBox)
        ));
    }
}
