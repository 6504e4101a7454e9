//! Finite Fourier polynomials on the m-torus with real values.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{QuantizeError, Result};

const REALITY_TOL: f64 = 1e-12;

/// A finite map from integer frequency vectors to complex coefficients with
/// the reality constraint `c_{-n} = conj(c_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierPoly {
    m: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl FourierPoly {
    pub fn zero(m: usize) -> Self {
        FourierPoly {
            m,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, value: f64) -> Self {
        let mut p = Self::zero(m);
        if value != 0.0 {
            p.coeffs.insert(vec![0; m], Complex64::new(value, 0.0));
        }
        p
    }

    /// `cos(phi_k)`.
    pub fn cos_angle(m: usize, k: usize) -> Result<Self> {
        Self::single_harmonic(m, k, Complex64::new(0.5, 0.0))
    }

    /// `sin(phi_k)`.
    pub fn sin_angle(m: usize, k: usize) -> Result<Self> {
        // sin = (e^{i phi} - e^{-i phi})/(2i): coefficient -i/2 at +1.
        Self::single_harmonic(m, k, Complex64::new(0.0, -0.5))
    }

    fn single_harmonic(m: usize, k: usize, c_plus: Complex64) -> Result<Self> {
        if k >= m {
            return Err(QuantizeError::IndexOutOfRange { index: k, m });
        }
        let mut plus = vec![0i64; m];
        plus[k] = 1;
        let mut minus = vec![0i64; m];
        minus[k] = -1;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(plus, c_plus);
        coeffs.insert(minus, c_plus.conj());
        Ok(FourierPoly { m, coeffs })
    }

    /// Build from raw coefficients, enforcing the reality constraint.
    pub fn from_coeffs(m: usize, items: impl IntoIterator<Item = (Vec<i64>, Complex64)>) -> Result<Self> {
        let mut coeffs: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (n, c) in items {
            if n.len() != m {
                return Err(QuantizeError::DimensionMismatch {
                    want: m,
                    got: n.len(),
                });
            }
            *coeffs.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| c.norm() != 0.0);
        let poly = FourierPoly { m, coeffs };
        if !poly.is_real() {
            return Err(QuantizeError::NotReal);
        }
        Ok(poly)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|(n, c)| {
            let neg: Vec<i64> = n.iter().map(|v| -v).collect();
            let other = self
                .coeffs
                .get(&neg)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0));
            (other - c.conj()).norm() <= REALITY_TOL * (1.0 + c.norm())
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, n: &[i64]) -> Complex64 {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Max |n_k| over the support.
    pub fn bandwidth(&self) -> i64 {
        self.coeffs
            .keys()
            .flat_map(|n| n.iter().map(|v| v.abs()))
            .max()
            .unwrap_or(0)
    }

    /// Partial derivative with respect to angle `k`: multiply by `i n_k`.
    pub fn derivative(&self, k: usize) -> Result<Self> {
        if k >= self.m {
            return Err(QuantizeError::IndexOutOfRange { index: k, m: self.m });
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(n, _)| n[k] != 0)
            .map(|(n, c)| (n.clone(), Complex64::new(0.0, n[k] as f64) * c))
            .collect();
        Ok(FourierPoly { m: self.m, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(QuantizeError::DimensionMismatch {
                want: self.m,
                got: other.m,
            });
        }
        let mut coeffs = self.coeffs.clone();
        for (n, c) in &other.coeffs {
            *coeffs.entry(n.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| c.norm() != 0.0);
        Ok(FourierPoly { m: self.m, coeffs })
    }

    pub fn scale(&self, s: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| (n.clone(), c * s))
            .filter(|(_, c)| c.norm() != 0.0)
            .collect();
        FourierPoly { m: self.m, coeffs }
    }

    /// Pointwise product = convolution of coefficients.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(QuantizeError::DimensionMismatch {
                want: self.m,
                got: other.m,
            });
        }
        let mut coeffs: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let n: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *coeffs.entry(n).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        coeffs.retain(|_, c| c.norm() != 0.0);
        Ok(FourierPoly { m: self.m, coeffs })
    }

    /// Evaluate at an angle vector.
    pub fn eval(&self, phi: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in &self.coeffs {
            let phase: f64 = n.iter().zip(phi).map(|(k, x)| *k as f64 * x).sum();
            acc += c * Complex64::new(0.0, phase).exp();
        }
        acc
    }
}
