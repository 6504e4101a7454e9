//! Differentiable scalar fields on a phase chart.

use std::fmt;
use std::sync::Arc;

use crate::chart::{PhaseChart, PhasePoint, SymbolTable};
use crate::error::{CoreError, Result};
use crate::expr::{self, DisplayWith, Expr, ExprRef};
use crate::parse::parse_expression;

/// A scalar field built from an expression tree, with symbolic partials
/// with respect to every chart symbol. Immutable after construction and
/// cheap to clone and share across threads.
#[derive(Debug, Clone)]
pub struct Observable {
    table: SymbolTable,
    expr: ExprRef,
    grad: Arc<Vec<ExprRef>>,
}

impl Observable {
    pub fn from_expr(table: SymbolTable, expr: ExprRef) -> Self {
        let grad = (0..table.len()).map(|i| expr.diff(i)).collect();
        Observable {
            table,
            expr,
            grad: Arc::new(grad),
        }
    }

    pub fn parse(text: &str, table: &SymbolTable) -> Result<Self> {
        let expr = parse_expression(text, table.names())?;
        Ok(Self::from_expr(table.clone(), expr))
    }

    pub fn constant(table: &SymbolTable, value: f64) -> Self {
        Self::from_expr(table.clone(), expr::constant(value))
    }

    pub fn symbol(table: &SymbolTable, name: &str) -> Result<Self> {
        let i = table
            .index(name)
            .ok_or_else(|| CoreError::UnknownIdentifier {
                name: name.to_string(),
                offset: 0,
            })?;
        Ok(Self::from_expr(table.clone(), expr::var(i)))
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn expr(&self) -> &ExprRef {
        &self.expr
    }

    /// Symbolic partial with respect to symbol `i`.
    pub fn partial(&self, i: usize) -> &ExprRef {
        &self.grad[i]
    }

    /// Raw evaluation; singularities surface as non-finite values.
    pub fn eval_raw(&self, coords: &[f64]) -> f64 {
        self.expr.eval(coords)
    }

    pub fn eval(&self, coords: &[f64]) -> Result<f64> {
        let v = self.expr.eval(coords);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CoreError::Singularity { t: None })
        }
    }

    pub fn eval_at(&self, z: &PhasePoint) -> Result<f64> {
        self.check_point(z)?;
        self.eval(z.coords())
    }

    /// Evaluate the symbolic gradient at a coordinate vector.
    pub fn grad_eval(&self, coords: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.grad.len());
        for g in self.grad.iter() {
            let v = g.eval(coords);
            if !v.is_finite() {
                return Err(CoreError::Singularity { t: None });
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Central finite-difference partial with step `h`, used as the
    /// independent check against the symbolic gradient.
    pub fn finite_diff_partial(&self, coords: &[f64], i: usize, h: f64) -> f64 {
        let mut plus = coords.to_vec();
        let mut minus = coords.to_vec();
        plus[i] += h;
        minus[i] -= h;
        (self.expr.eval(&plus) - self.expr.eval(&minus)) / (2.0 * h)
    }

    pub fn check_point(&self, z: &PhasePoint) -> Result<()> {
        if *z.chart().table() == self.table {
            Ok(())
        } else {
            Err(CoreError::TableMismatch)
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        self.expr.as_constant()
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.expr.depends_on(i)
    }

    fn combine(&self, other: &Observable, f: impl Fn(&ExprRef, &ExprRef) -> ExprRef) -> Result<Observable> {
        if self.table != other.table {
            return Err(CoreError::TableMismatch);
        }
        Ok(Observable::from_expr(self.table.clone(), f(&self.expr, &other.expr)))
    }

    pub fn add(&self, other: &Observable) -> Result<Observable> {
        self.combine(other, expr::add)
    }

    pub fn sub(&self, other: &Observable) -> Result<Observable> {
        self.combine(other, expr::sub)
    }

    pub fn mul(&self, other: &Observable) -> Result<Observable> {
        self.combine(other, expr::mul)
    }

    pub fn div(&self, other: &Observable) -> Result<Observable> {
        self.combine(other, expr::div)
    }

    pub fn atan2(y: &Observable, x: &Observable) -> Result<Observable> {
        y.combine(x, expr::atan2)
    }

    pub fn neg(&self) -> Observable {
        Observable::from_expr(self.table.clone(), expr::neg(&self.expr))
    }

    pub fn scale(&self, c: f64) -> Observable {
        Observable::from_expr(self.table.clone(), expr::mul(&expr::constant(c), &self.expr))
    }

    pub fn add_const(&self, c: f64) -> Observable {
        Observable::from_expr(self.table.clone(), expr::add(&self.expr, &expr::constant(c)))
    }

    pub fn pow(&self, r: f64) -> Observable {
        Observable::from_expr(self.table.clone(), expr::pow(&self.expr, r))
    }

    pub fn sqrt(&self) -> Observable {
        Observable::from_expr(self.table.clone(), expr::sqrt(&self.expr))
    }

    pub fn sin(&self) -> Observable {
        Observable::from_expr(self.table.clone(), expr::sin(&self.expr))
    }

    pub fn cos(&self) -> Observable {
        Observable::from_expr(self.table.clone(), expr::cos(&self.expr))
    }

    pub fn exp(&self) -> Observable {
        Observable::from_expr(self.table.clone(), expr::exp(&self.expr))
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        DisplayWith {
            expr: &self.expr,
            names: self.table.names(),
        }
        .fmt(f)
    }
}

impl PartialEq for Observable {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.expr == other.expr
    }
}

/// Parse an expression against a chart's symbols.
pub fn parse_observable(text: &str, chart: &PhaseChart) -> Result<Observable> {
    Observable::parse(text, chart.table())
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<Observable>();
    check::<Expr>();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_momentum_partial() {
        let chart = PhaseChart::new(2);
        let f = parse_observable("q1*p2 - q2*p1", &chart).unwrap();
        // d/dp2 = q1
        let d = f.partial(chart.p_index(1));
        assert_eq!(**d, Expr::Var(0));
    }

    #[test]
    fn kepler_hamiltonian_values() {
        let chart = PhaseChart::new(2);
        let h = parse_observable("0.5*(p1^2+p2^2) - 1/(q1^2+q2^2)^0.5", &chart).unwrap();
        let z = chart.point(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((h.eval_at(&z).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn out_of_chart_symbol_is_error() {
        let chart = PhaseChart::new(2);
        let err = parse_observable("q3", &chart).unwrap_err();
        assert!(matches!(err, CoreError::UnknownIdentifier { .. }));
    }

    #[test]
    fn display_round_trips() {
        let chart = PhaseChart::new(2);
        for text in [
            "q1*p2 - q2*p1",
            "0.5*(p1^2+p2^2) - 1/(q1^2+q2^2)^0.5",
            "atan2(q2, q1) + sin(p1)*exp(-q1)",
            "-(q1 + p1)^-0.5/sqrt(p2)",
        ] {
            let f = parse_observable(text, &chart).unwrap();
            let printed = f.to_string();
            let reparsed = parse_observable(&printed, &chart).unwrap();
            assert_eq!(f, reparsed, "round trip failed for `{text}` -> `{printed}`");
        }
    }

    #[test]
    fn singular_evaluation_reported() {
        let chart = PhaseChart::new(1);
        let f = parse_observable("1/q1", &chart).unwrap();
        assert!(f.eval(&[0.0, 0.0]).is_err());
        let g = parse_observable("sqrt(q1)", &chart).unwrap();
        assert!(g.eval(&[-1.0, 0.0]).is_err());
    }
}
