//! Parameter paths with explicit derivatives, and monotone reparametrizations.
//!
//! The path derivative enters the transport equations directly, so paths
//! carry derivative expressions; nothing is differentiated numerically.

use actionangle_core::{Observable, SymbolTable};

use crate::error::{HolonomyError, Result};

#[derive(Debug, Clone)]
pub struct ParameterPath {
    d: usize,
    t_end: f64,
    components: Vec<Observable>,
    derivatives: Vec<Observable>,
    /// Interior points where smoothness may fail; integration restarts there.
    breakpoints: Vec<f64>,
}

fn time_table() -> SymbolTable {
    SymbolTable::new(["t"]).expect("single symbol")
}

impl ParameterPath {
    pub fn parse(
        t_end: f64,
        components: &[String],
        derivatives: &[String],
        breakpoints: Vec<f64>,
    ) -> Result<Self> {
        if !(t_end > 0.0) {
            return Err(HolonomyError::Config("path duration must be positive".into()));
        }
        if components.len() != derivatives.len() {
            return Err(HolonomyError::DimensionMismatch {
                want: components.len(),
                got: derivatives.len(),
            });
        }
        let table = time_table();
        let comp = components
            .iter()
            .map(|s| Observable::parse(s, &table))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let deriv = derivatives
            .iter()
            .map(|s| Observable::parse(s, &table))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let mut bps: Vec<f64> = breakpoints
            .into_iter()
            .filter(|b| *b > 0.0 && *b < t_end)
            .collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        Ok(ParameterPath {
            d: comp.len(),
            t_end,
            components: comp,
            derivatives: deriv,
            breakpoints: bps,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, t: f64, out: &mut [f64]) -> Result<()> {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(&[t])?;
        }
        Ok(())
    }

    pub fn deriv(&self, t: f64, out: &mut [f64]) -> Result<()> {
        for (o, c) in out.iter_mut().zip(&self.derivatives) {
            *o = c.eval(&[t])?;
        }
        Ok(())
    }

    /// Total displacement of each component over the path.
    pub fn displacement(&self) -> Result<Vec<f64>> {
        let mut start = vec![0.0; self.d];
        let mut end = vec![0.0; self.d];
        self.eval(0.0, &mut start)?;
        self.eval(self.t_end, &mut end)?;
        Ok(end.iter().zip(&start).map(|(e, s)| e - s).collect())
    }
}

/// A monotone map of the time interval, smooth or piecewise linear.
#[derive(Debug, Clone)]
pub enum Reparametrization {
    Expression {
        map: Observable,
        derivative: Observable,
        t_end: f64,
    },
    PiecewiseLinear {
        /// Knots `(t, value)` with strictly increasing `t` and values.
        knots: Vec<(f64, f64)>,
    },
}

impl Reparametrization {
    pub fn parse_expression(t_end: f64, map: &str, derivative: &str) -> Result<Self> {
        let table = time_table();
        Ok(Reparametrization::Expression {
            map: Observable::parse(map, &table)?,
            derivative: Observable::parse(derivative, &table)?,
            t_end,
        })
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(HolonomyError::Config(
                "piecewise-linear map needs at least two knots".into(),
            ));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(HolonomyError::NonMonotone { t: w[1].0 });
            }
        }
        Ok(Reparametrization::PiecewiseLinear { knots })
    }

    pub fn t_end(&self) -> f64 {
        match self {
            Reparametrization::Expression { t_end, .. } => *t_end,
            Reparametrization::PiecewiseLinear { knots } => knots.last().unwrap().0,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Reparametrization::Expression { map, .. } => Ok(map.eval(&[t])?),
            Reparametrization::PiecewiseLinear { knots } => {
                let i = segment_index(knots, t);
                let (t0, v0) = knots[i];
                let (t1, v1) = knots[i + 1];
                Ok(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
            }
        }
    }

    pub fn deriv(&self, t: f64) -> Result<f64> {
        match self {
            Reparametrization::Expression { derivative, .. } => Ok(derivative.eval(&[t])?),
            Reparametrization::PiecewiseLinear { knots } => {
                let i = segment_index(knots, t);
                let (t0, v0) = knots[i];
                let (t1, v1) = knots[i + 1];
                Ok((v1 - v0) / (t1 - t0))
            }
        }
    }

    /// Derivative with a disambiguating span: at a knot the one-sided slope
    /// of the segment containing the span is used. Integrators restart at
    /// breakpoints, so stage times at a knot must see the active segment.
    pub fn deriv_within(&self, t: f64, span: (f64, f64)) -> Result<f64> {
        match self {
            Reparametrization::Expression { derivative, .. } => Ok(derivative.eval(&[t])?),
            Reparametrization::PiecewiseLinear { knots } => {
                let i = segment_index(knots, 0.5 * (span.0 + span.1));
                let (t0, v0) = knots[i];
                let (t1, v1) = knots[i + 1];
                Ok((v1 - v0) / (t1 - t0))
            }
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Reparametrization::Expression { .. } => Vec::new(),
            Reparametrization::PiecewiseLinear { knots } => {
                knots[1..knots.len() - 1].iter().map(|(t, _)| *t).collect()
            }
        }
    }

    /// Check `repar(0) = 0`, `repar(T') = T` and positivity of the derivative
    /// at sample points.
    pub fn validate(&self, target_t: f64) -> Result<()> {
        let t_end = self.t_end();
        let got0 = self.eval(0.0)?;
        let got1 = self.eval(t_end)?;
        if got0.abs() > 1e-10 || (got1 - target_t).abs() > 1e-10 {
            return Err(HolonomyError::BadEndpoints {
                got0,
                got1,
                want1: target_t,
            });
        }
        // The derivative may vanish at the endpoints (t^2 is a valid map on
        // [0,1]) but must be positive in the interior.
        let samples = 1000;
        for i in 0..=samples {
            let t = t_end * i as f64 / samples as f64;
            let d = self.deriv(t)?;
            let interior = i != 0 && i != samples;
            if d < 0.0 || (interior && d == 0.0) {
                return Err(HolonomyError::NonMonotone { t });
            }
        }
        Ok(())
    }
}

fn segment_index(knots: &[(f64, f64)], t: f64) -> usize {
    let n = knots.len();
    for i in 0..n - 1 {
        if t <= knots[i + 1].0 {
            return i;
        }
    }
    n - 2
}
