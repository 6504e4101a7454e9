//! Connection coefficients on the product of a parameter space and a torus.
//!
//! The coefficients are expressions in the symbols `s1..sd` (parameters) and
//! `phi1..phim` (angles). Periodicity in every angle is enforced
//! syntactically: an angle symbol may appear only inside sin or cos.

use actionangle_core::expr::Expr;
use actionangle_core::{Observable, SymbolTable};

use crate::error::{HolonomyError, Result};

#[derive(Debug, Clone)]
pub struct ConnectionField {
    d: usize,
    m: usize,
    table: SymbolTable,
    /// Indexed [angle k][parameter alpha].
    coeffs: Vec<Vec<Observable>>,
}

pub fn connection_symbols(d: usize, m: usize) -> SymbolTable {
    let mut names: Vec<String> = (1..=d).map(|a| format!("s{a}")).collect();
    names.extend((1..=m).map(|k| format!("phi{k}")));
    SymbolTable::new(names).expect("generated names are distinct")
}

impl ConnectionField {
    /// Build from expression strings, `texts[k][alpha]` for the coefficient
    /// of angle `k+1` along parameter `alpha+1`.
    pub fn parse(d: usize, m: usize, texts: &[Vec<String>]) -> Result<Self> {
        if texts.len() != m {
            return Err(HolonomyError::DimensionMismatch {
                want: m,
                got: texts.len(),
            });
        }
        let table = connection_symbols(d, m);
        let mut coeffs = Vec::with_capacity(m);
        for row in texts {
            if row.len() != d {
                return Err(HolonomyError::DimensionMismatch {
                    want: d,
                    got: row.len(),
                });
            }
            let mut parsed = Vec::with_capacity(d);
            for text in row {
                let obs = Observable::parse(text, &table)?;
                check_periodicity(obs.expr(), d, m, false).map_err(|_| {
                    HolonomyError::NotPeriodic {
                        coefficient: text.clone(),
                    }
                })?;
                parsed.push(obs);
            }
            coeffs.push(parsed);
        }
        Ok(ConnectionField {
            d,
            m,
            table,
            coeffs,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn coefficient(&self, k: usize, alpha: usize) -> &Observable {
        &self.coeffs[k][alpha]
    }

    /// Index of angle `k` in the symbol table's coordinate layout.
    pub fn angle_index(&self, k: usize) -> usize {
        self.d + k
    }

    /// When every coefficient is a constant, the matrix `Lambda[k][alpha]`.
    pub fn principal_matrix(&self) -> Option<Vec<Vec<f64>>> {
        self.coeffs
            .iter()
            .map(|row| row.iter().map(Observable::as_constant).collect())
            .collect()
    }

    /// Coordinate buffer layout is `[sigma; phi]`.
    pub fn fill_coords(&self, sigma: &[f64], phi: &[f64], buf: &mut Vec<f64>) {
        buf.clear();
        buf.extend_from_slice(sigma);
        buf.extend_from_slice(phi);
    }
}

/// An angle variable is admissible only under at least one sin/cos.
fn check_periodicity(e: &Expr, d: usize, m: usize, inside_trig: bool) -> std::result::Result<(), ()> {
    match e {
        Expr::Const(_) => Ok(()),
        Expr::Var(i) => {
            if *i >= d && *i < d + m && !inside_trig {
                Err(())
            } else {
                Ok(())
            }
        }
        Expr::Neg(a) | Expr::Sqrt(a) | Expr::Exp(a) => check_periodicity(a, d, m, inside_trig),
        Expr::Pow(a, _) => check_periodicity(a, d, m, inside_trig),
        Expr::Sin(a) | Expr::Cos(a) => check_periodicity(a, d, m, true),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b)
        | Expr::Atan2(a, b) => {
            check_periodicity(a, d, m, inside_trig)?;
            check_periodicity(b, d, m, inside_trig)
        }
    }
}
