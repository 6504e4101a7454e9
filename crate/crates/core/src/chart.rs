//! Canonical phase charts and phase points.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::parse::FUNCTION_NAMES;

/// An immutable, shareable table of pairwise-distinct symbol names.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    inner: Arc<TableInner>,
}

#[derive(Debug)]
struct TableInner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl SymbolTable {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if FUNCTION_NAMES.contains(&n.as_str()) {
                return Err(CoreError::BadSymbol(n.clone()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(CoreError::BadSymbol(n.clone()));
            }
        }
        Ok(SymbolTable {
            inner: Arc::new(TableInner { names, index }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.inner.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }
}

impl PartialEq for SymbolTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.names == other.inner.names
    }
}

/// A chart of canonical coordinates `q1..qn, p1..pn`, optionally carrying the
/// explicit time symbol `t` and extra chart-specific names. The bracket
/// structure is always the canonical one on the `(q^i, p_i)` pairs; `t` and
/// extras are inert.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseChart {
    n_dof: usize,
    time_dependent: bool,
    table: SymbolTable,
}

impl PhaseChart {
    pub fn new(n_dof: usize) -> Self {
        Self::build(n_dof, false, &[]).expect("canonical names are distinct")
    }

    pub fn time_dependent(n_dof: usize) -> Self {
        Self::build(n_dof, true, &[]).expect("canonical names are distinct")
    }

    pub fn with_extras(n_dof: usize, time_dependent: bool, extras: &[&str]) -> Result<Self> {
        Self::build(n_dof, time_dependent, extras)
    }

    fn build(n_dof: usize, time_dependent: bool, extras: &[&str]) -> Result<Self> {
        assert!(n_dof > 0, "chart needs at least one degree of freedom");
        let mut names: Vec<String> = Vec::with_capacity(2 * n_dof + 1 + extras.len());
        for i in 1..=n_dof {
            names.push(format!("q{i}"));
        }
        for i in 1..=n_dof {
            names.push(format!("p{i}"));
        }
        if time_dependent {
            names.push("t".to_string());
        }
        names.extend(extras.iter().map(|s| s.to_string()));
        Ok(PhaseChart {
            n_dof,
            time_dependent,
            table: SymbolTable::new(names)?,
        })
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }

    /// Index of `q^{i+1}` (zero-based `i`).
    pub fn q_index(&self, i: usize) -> usize {
        debug_assert!(i < self.n_dof);
        i
    }

    /// Index of `p_{i+1}` (zero-based `i`).
    pub fn p_index(&self, i: usize) -> usize {
        debug_assert!(i < self.n_dof);
        self.n_dof + i
    }

    pub fn t_index(&self) -> Option<usize> {
        self.time_dependent.then_some(2 * self.n_dof)
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn point(&self, coords: Vec<f64>) -> Result<PhasePoint> {
        if coords.len() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                got: coords.len(),
                want: self.dim(),
            });
        }
        Ok(PhasePoint {
            chart: self.clone(),
            coords,
        })
    }

    /// Convenience constructor from position and momentum blocks.
    pub fn point_qp(&self, q: &[f64], p: &[f64]) -> Result<PhasePoint> {
        if q.len() != self.n_dof || p.len() != self.n_dof {
            return Err(CoreError::DimensionMismatch {
                got: q.len() + p.len(),
                want: 2 * self.n_dof,
            });
        }
        let mut coords = Vec::with_capacity(self.dim());
        coords.extend_from_slice(q);
        coords.extend_from_slice(p);
        coords.resize(self.dim(), 0.0);
        Ok(PhasePoint {
            chart: self.clone(),
            coords,
        })
    }
}

/// A point of a phase chart: the chart reference plus a coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    chart: PhaseChart,
    coords: Vec<f64>,
}

impl PhasePoint {
    pub fn chart(&self) -> &PhaseChart {
        &self.chart
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn q(&self, i: usize) -> f64 {
        self.coords[self.chart.q_index(i)]
    }

    pub fn p(&self, i: usize) -> f64 {
        self.coords[self.chart.p_index(i)]
    }

    pub fn t(&self) -> Option<f64> {
        self.chart.t_index().map(|i| self.coords[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_layout() {
        let chart = PhaseChart::time_dependent(2);
        assert_eq!(chart.dim(), 5);
        assert_eq!(chart.table().name(0), "q1");
        assert_eq!(chart.table().name(2), "p1");
        assert_eq!(chart.table().name(4), "t");
        assert_eq!(chart.q_index(1), 1);
        assert_eq!(chart.p_index(0), 2);
        assert_eq!(chart.t_index(), Some(4));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(SymbolTable::new(["a", "b", "a"]).is_err());
        assert!(SymbolTable::new(["sin"]).is_err());
        assert!(PhaseChart::with_extras(1, false, &["q1"]).is_err());
    }

    #[test]
    fn point_length_checked() {
        let chart = PhaseChart::new(2);
        assert!(chart.point(vec![0.0; 3]).is_err());
        let z = chart.point(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(z.q(0), 1.0);
        assert_eq!(z.p(1), 1.0);
    }
}
