//! Real polynomials in the action variables `I_1..I_m`.

use std::collections::BTreeMap;

use actionangle_core::expr::Expr;
use actionangle_core::SymbolTable;

use crate::error::{QuantizeError, Result};

/// A polynomial with real coefficients, stored as a map from exponent
/// multi-indices to coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionPolynomial {
    m: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl ActionPolynomial {
    pub fn zero(m: usize) -> Self {
        ActionPolynomial {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: f64) -> Self {
        let mut p = Self::zero(m);
        if c != 0.0 {
            p.terms.insert(vec![0; m], c);
        }
        p
    }

    /// The variable `I_{k+1}`.
    pub fn variable(m: usize, k: usize) -> Result<Self> {
        if k >= m {
            return Err(QuantizeError::IndexOutOfRange { index: k, m });
        }
        let mut exps = vec![0u32; m];
        exps[k] = 1;
        let mut p = Self::zero(m);
        p.terms.insert(exps, 1.0);
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &f64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert(0.0) += c;
        }
        terms.retain(|_, c| *c != 0.0);
        ActionPolynomial { m: self.m, terms }
    }

    pub fn scale(&self, s: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c * s))
            .filter(|(_, c)| *c != 0.0)
            .collect();
        ActionPolynomial { m: self.m, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        terms.retain(|_, c| *c != 0.0);
        ActionPolynomial { m: self.m, terms }
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (exps, c) in &self.terms {
            let mut term = *c;
            for (e, v) in exps.iter().zip(values) {
                term *= v.powi(*e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Gradient with respect to the actions.
    pub fn grad(&self, values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (exps, c) in &self.terms {
            for k in 0..self.m {
                if exps[k] == 0 {
                    continue;
                }
                let mut term = *c * exps[k] as f64;
                for (j, (e, v)) in exps.iter().zip(values).enumerate() {
                    let p = if j == k { *e - 1 } else { *e };
                    term *= v.powi(p as i32);
                }
                out[k] += term;
            }
        }
        out
    }

    /// Parse a polynomial in the symbols `I1..Im` via the expression grammar.
    /// Division is allowed by constants only; exponents must be non-negative
    /// integers; function calls are not polynomials.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let names: Vec<String> = (1..=m).map(|k| format!("I{k}")).collect();
        let table = SymbolTable::new(names).expect("action names are distinct");
        let obs = actionangle_core::Observable::parse(text, &table)?;
        Self::from_expr(obs.expr(), m)
    }

    fn from_expr(e: &Expr, m: usize) -> Result<Self> {
        match e {
            Expr::Const(c) => Ok(Self::constant(m, *c)),
            Expr::Var(i) => Self::variable(m, *i),
            Expr::Neg(a) => Ok(Self::from_expr(a, m)?.scale(-1.0)),
            Expr::Add(a, b) => Ok(Self::from_expr(a, m)?.add(&Self::from_expr(b, m)?)),
            Expr::Sub(a, b) => {
                Ok(Self::from_expr(a, m)?.add(&Self::from_expr(b, m)?.scale(-1.0)))
            }
            Expr::Mul(a, b) => Ok(Self::from_expr(a, m)?.mul(&Self::from_expr(b, m)?)),
            Expr::Div(a, b) => match b.as_constant() {
                Some(c) if c != 0.0 => Ok(Self::from_expr(a, m)?.scale(1.0 / c)),
                _ => Err(QuantizeError::NotPolynomial(
                    "division by a non-constant".into(),
                )),
            },
            Expr::Pow(a, r) => {
                if *r < 0.0 || r.fract() != 0.0 {
                    return Err(QuantizeError::NotPolynomial(format!(
                        "exponent {r} is not a non-negative integer"
                    )));
                }
                let base = Self::from_expr(a, m)?;
                let mut acc = Self::constant(m, 1.0);
                for _ in 0..(*r as u32) {
                    acc = acc.mul(&base);
                }
                Ok(acc)
            }
            _ => Err(QuantizeError::NotPolynomial(
                "function calls are not polynomial".into(),
            )),
        }
    }
}
