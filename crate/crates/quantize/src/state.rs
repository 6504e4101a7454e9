//! Finite-support states on the m-torus.
//!
//! A state is a finite map from mode vectors to complex amplitudes together
//! with an offset vector `lambda` (components canonically in [0,1)). Mode
//! frequencies are stored as doubled integers so that the half-integer modes
//! of antiperiodic sections (the double-cover representation used for
//! lambda = +-1/2) are exact.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{QuantizeError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TorusState {
    m: usize,
    lambda: Vec<f64>,
    /// Keys are 2x the mode frequency per axis.
    amps: BTreeMap<Vec<i64>, Complex64>,
}

fn canonical_lambda(lambda: &[f64]) -> Vec<f64> {
    lambda.iter().map(|l| l.rem_euclid(1.0)).collect()
}

impl TorusState {
    pub fn zero(m: usize, lambda: &[f64]) -> Result<Self> {
        if lambda.len() != m {
            return Err(QuantizeError::DimensionMismatch {
                want: m,
                got: lambda.len(),
            });
        }
        Ok(TorusState {
            m,
            lambda: canonical_lambda(lambda),
            amps: BTreeMap::new(),
        })
    }

    /// The basis vector `psi_n = exp[i n.phi]` for an integer mode.
    pub fn basis(m: usize, lambda: &[f64], n: &[i64]) -> Result<Self> {
        let mut s = Self::zero(m, lambda)?;
        s.add_mode(n, Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn add_mode(&mut self, n: &[i64], amp: Complex64) -> Result<()> {
        if n.len() != self.m {
            return Err(QuantizeError::DimensionMismatch {
                want: self.m,
                got: n.len(),
            });
        }
        let key: Vec<i64> = n.iter().map(|v| 2 * v).collect();
        self.add_key(key, amp);
        Ok(())
    }

    /// Add an amplitude at an arbitrary integer-or-half-integer frequency.
    pub fn add_frequency(&mut self, freq: &[f64], amp: Complex64) -> Result<()> {
        if freq.len() != self.m {
            return Err(QuantizeError::DimensionMismatch {
                want: self.m,
                got: freq.len(),
            });
        }
        let mut key = Vec::with_capacity(self.m);
        for f in freq {
            let doubled = 2.0 * f;
            let rounded = doubled.round();
            if (doubled - rounded).abs() > 1e-9 {
                return Err(QuantizeError::BadFrequency(*f));
            }
            key.push(rounded as i64);
        }
        self.add_key(key, amp);
        Ok(())
    }

    pub(crate) fn add_key(&mut self, key: Vec<i64>, amp: Complex64) {
        let entry = self.amps.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += amp;
    }

    pub fn amp(&self, n: &[i64]) -> Complex64 {
        let key: Vec<i64> = n.iter().map(|v| 2 * v).collect();
        self.amps
            .get(&key)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterate over (frequency vector, amplitude).
    pub fn modes(&self) -> impl Iterator<Item = (Vec<f64>, Complex64)> + '_ {
        self.amps
            .iter()
            .map(|(k, c)| (k.iter().map(|v| *v as f64 / 2.0).collect(), *c))
    }

    pub(crate) fn keys(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.amps.iter()
    }

    pub(crate) fn like(&self) -> Self {
        TorusState {
            m: self.m,
            lambda: self.lambda.clone(),
            amps: BTreeMap::new(),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.values().map(|c| c.norm_sqr()).sum()
    }

    /// Hermitian inner product, linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.amps {
            if let Some(d) = other.amps.get(k) {
                acc += c * d.conj();
            }
        }
        acc
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let amps = self.amps.iter().map(|(k, c)| (k.clone(), c * s)).collect();
        TorusState {
            m: self.m,
            lambda: self.lambda.clone(),
            amps,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(QuantizeError::DimensionMismatch {
                want: self.m,
                got: other.m,
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.amps {
            out.add_key(k.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Multiply each mode amplitude by `f(frequency + lambda)`.
    pub fn map_phases(&self, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let mut out = self.like();
        let mut shifted = vec![0.0; self.m];
        for (k, c) in &self.amps {
            for (i, v) in k.iter().enumerate() {
                shifted[i] = *v as f64 / 2.0 + self.lambda[i];
            }
            out.add_key(k.clone(), c * f(&shifted));
        }
        out
    }

    /// Drop numerically-zero amplitudes below `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.amps.retain(|_, c| c.norm() > tol);
    }

    /// JSON document `{m, lambda: [...], modes: [{n: [...], re, im}]}`.
    /// Mode entries are sorted; integer frequencies are written as integers,
    /// half-integer ones as decimals.
    pub fn to_json(&self) -> Value {
        let modes: Vec<Value> = self
            .amps
            .iter()
            .map(|(k, c)| {
                let n: Vec<Value> = k
                    .iter()
                    .map(|v| {
                        if v % 2 == 0 {
                            json!(v / 2)
                        } else {
                            json!(*v as f64 / 2.0)
                        }
                    })
                    .collect();
                json!({"n": n, "re": c.re, "im": c.im})
            })
            .collect();
        json!({"m": self.m, "lambda": self.lambda, "modes": modes})
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let obj: &Map<String, Value> = doc
            .as_object()
            .ok_or_else(|| QuantizeError::BadState("expected an object".into()))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| QuantizeError::BadState("missing integer field `m`".into()))?
            as usize;
        let lambda: Vec<f64> = obj
            .get("lambda")
            .and_then(Value::as_array)
            .ok_or_else(|| QuantizeError::BadState("missing array field `lambda`".into()))?
            .iter()
            .map(|v| v.as_f64().ok_or_else(|| QuantizeError::BadState("non-numeric lambda".into())))
            .collect::<Result<_>>()?;
        let mut state = TorusState::zero(m, &lambda)?;
        let modes = obj
            .get("modes")
            .and_then(Value::as_array)
            .ok_or_else(|| QuantizeError::BadState("missing array field `modes`".into()))?;
        for entry in modes {
            let n: Vec<f64> = entry
                .get("n")
                .and_then(Value::as_array)
                .ok_or_else(|| QuantizeError::BadState("mode without `n`".into()))?
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| QuantizeError::BadState("non-numeric mode index".into())))
                .collect::<Result<_>>()?;
            let re = entry
                .get("re")
                .and_then(Value::as_f64)
                .ok_or_else(|| QuantizeError::BadState("mode without `re`".into()))?;
            let im = entry
                .get("im")
                .and_then(Value::as_f64)
                .ok_or_else(|| QuantizeError::BadState("mode without `im`".into()))?;
            state.add_frequency(&n, Complex64::new(re, im))?;
        }
        Ok(state)
    }
}
