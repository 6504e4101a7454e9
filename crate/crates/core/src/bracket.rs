//! Poisson brackets, Hamiltonian vector fields and structure checks.
//!
//! The bracket convention is the canonical one:
//! `{f,g} = sum_i (df/dp_i dg/dq^i - df/dq^i dg/dp_i)`,
//! so `{p_i, q^i} = 1` and the evolution of an observable along the flow of
//! a Hamiltonian `H` is `dF/dt = {H, F}`. On time-dependent charts the `t`
//! symbol is inert in the bracket.

use nalgebra::DMatrix;

use crate::chart::{PhaseChart, PhasePoint};
use crate::error::{CoreError, Result};
use crate::expr;
use crate::observable::Observable;

/// Default first-level finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-6;
/// Step for nested (two-level) finite-difference brackets.
pub const NESTED_FD_STEP: f64 = 1e-4;
/// Relative singular-value threshold for numerical ranks.
pub const RANK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BracketScheme {
    /// Use symbolic partials.
    Analytic,
    /// Central finite differences with the given step.
    FiniteDiff { h: f64 },
}

fn require_finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CoreError::Singularity { t: None })
    }
}

fn check_pair(f: &Observable, g: &Observable, z: &PhasePoint) -> Result<()> {
    f.check_point(z)?;
    g.check_point(z)
}

/// Canonical Poisson bracket `{f,g}` at a phase point.
pub fn poisson_bracket(
    f: &Observable,
    g: &Observable,
    z: &PhasePoint,
    scheme: BracketScheme,
) -> Result<f64> {
    check_pair(f, g, z)?;
    let chart = z.chart();
    let coords = z.coords();
    match scheme {
        BracketScheme::Analytic => {
            let mut acc = 0.0;
            for i in 0..chart.n_dof() {
                let qi = chart.q_index(i);
                let pi = chart.p_index(i);
                acc += f.partial(pi).eval(coords) * g.partial(qi).eval(coords)
                    - f.partial(qi).eval(coords) * g.partial(pi).eval(coords);
            }
            require_finite(acc)
        }
        BracketScheme::FiniteDiff { h } => {
            let fv = |c: &[f64]| f.eval_raw(c);
            let gv = |c: &[f64]| g.eval_raw(c);
            require_finite(fd_bracket_fn(&fv, &gv, chart, coords, h))
        }
    }
}

/// Finite-difference bracket of two black-box scalar functions. This is the
/// first-level building block of the nested Jacobi check.
pub fn fd_bracket_fn(
    f: &dyn Fn(&[f64]) -> f64,
    g: &dyn Fn(&[f64]) -> f64,
    chart: &PhaseChart,
    coords: &[f64],
    h: f64,
) -> f64 {
    let mut buf = coords.to_vec();
    let mut partial = |fun: &dyn Fn(&[f64]) -> f64, i: usize| {
        let orig = buf[i];
        buf[i] = orig + h;
        let plus = fun(&buf);
        buf[i] = orig - h;
        let minus = fun(&buf);
        buf[i] = orig;
        (plus - minus) / (2.0 * h)
    };
    let mut acc = 0.0;
    for i in 0..chart.n_dof() {
        let qi = chart.q_index(i);
        let pi = chart.p_index(i);
        acc += partial(f, pi) * partial(g, qi) - partial(f, qi) * partial(g, pi);
    }
    acc
}

/// Symbolic bracket `{f,g}` as a new observable on the same chart.
pub fn poisson_bracket_observable(
    f: &Observable,
    g: &Observable,
    chart: &PhaseChart,
) -> Result<Observable> {
    if f.table() != chart.table() || g.table() != chart.table() {
        return Err(CoreError::TableMismatch);
    }
    let mut acc = expr::constant(0.0);
    for i in 0..chart.n_dof() {
        let qi = chart.q_index(i);
        let pi = chart.p_index(i);
        let term = expr::sub(
            &expr::mul(f.partial(pi), g.partial(qi)),
            &expr::mul(f.partial(qi), g.partial(pi)),
        );
        acc = expr::add(&acc, &term);
    }
    Ok(Observable::from_expr(chart.table().clone(), acc))
}

/// Tangent vector of the Hamiltonian vector field of `f`:
/// `dq^i/dt = df/dp_i`, `dp_i/dt = -df/dq^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
}

impl TangentVector {
    /// Pairing with the differential of `g` at the same point:
    /// `<theta_f, dg> = sum_i dq^i dg/dq^i + dp_i dg/dp_i`.
    pub fn pair_with_gradient(&self, g: &Observable, z: &PhasePoint) -> Result<f64> {
        g.check_point(z)?;
        let chart = z.chart();
        let mut acc = 0.0;
        for i in 0..chart.n_dof() {
            acc += self.dq[i] * g.partial(chart.q_index(i)).eval(z.coords())
                + self.dp[i] * g.partial(chart.p_index(i)).eval(z.coords());
        }
        require_finite(acc)
    }
}

pub fn hamiltonian_vector_field(f: &Observable, z: &PhasePoint) -> Result<TangentVector> {
    f.check_point(z)?;
    let chart = z.chart();
    let coords = z.coords();
    let mut dq = Vec::with_capacity(chart.n_dof());
    let mut dp = Vec::with_capacity(chart.n_dof());
    for i in 0..chart.n_dof() {
        dq.push(require_finite(f.partial(chart.p_index(i)).eval(coords))?);
        dp.push(require_finite(-f.partial(chart.q_index(i)).eval(coords))?);
    }
    Ok(TangentVector { dq, dp })
}

/// Jacobi cyclic sum `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}` at a point.
///
/// The analytic scheme composes brackets symbolically; the finite-difference
/// scheme evaluates both bracket levels by central differences with the same
/// step (nested default `1e-4`).
pub fn jacobi_defect(
    f: &Observable,
    g: &Observable,
    h_obs: &Observable,
    z: &PhasePoint,
    scheme: BracketScheme,
) -> Result<f64> {
    check_pair(f, g, z)?;
    h_obs.check_point(z)?;
    let chart = z.chart().clone();
    match scheme {
        BracketScheme::Analytic => {
            let gh = poisson_bracket_observable(g, h_obs, &chart)?;
            let hf = poisson_bracket_observable(h_obs, f, &chart)?;
            let fg = poisson_bracket_observable(f, g, &chart)?;
            let a = poisson_bracket(f, &gh, z, BracketScheme::Analytic)?;
            let b = poisson_bracket(g, &hf, z, BracketScheme::Analytic)?;
            let c = poisson_bracket(h_obs, &fg, z, BracketScheme::Analytic)?;
            require_finite(a + b + c)
        }
        BracketScheme::FiniteDiff { h } => {
            let fv = |c: &[f64]| f.eval_raw(c);
            let gv = |c: &[f64]| g.eval_raw(c);
            let hv = |c: &[f64]| h_obs.eval_raw(c);
            let nested = |a: &dyn Fn(&[f64]) -> f64,
                          b: &dyn Fn(&[f64]) -> f64,
                          c: &dyn Fn(&[f64]) -> f64|
             -> f64 {
                let inner = |coords: &[f64]| fd_bracket_fn(b, c, &chart, coords, h);
                fd_bracket_fn(a, &inner, &chart, z.coords(), h)
            };
            let total = nested(&fv, &gv, &hv) + nested(&gv, &hv, &fv) + nested(&hv, &fv, &gv);
            require_finite(total)
        }
    }
}

/// Numerical rank of the `k x 2n` Jacobian of the observables with respect to
/// the canonical coordinates, by singular values with a relative threshold.
pub fn independence_rank(fs: &[Observable], z: &PhasePoint) -> Result<usize> {
    let chart = z.chart();
    let cols = 2 * chart.n_dof();
    let mut jac = DMatrix::zeros(fs.len(), cols);
    for (r, f) in fs.iter().enumerate() {
        f.check_point(z)?;
        for c in 0..cols {
            jac[(r, c)] = require_finite(f.partial(c).eval(z.coords()))?;
        }
    }
    Ok(matrix_rank(&jac))
}

fn matrix_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let max = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|s| **s > RANK_THRESHOLD * max)
        .count()
}

/// Antisymmetric matrix `s_ij = {F_i, F_j}(z)` plus its rank and corank.
#[derive(Debug, Clone)]
pub struct StructureMatrix {
    pub entries: DMatrix<f64>,
    pub rank: usize,
    pub corank: usize,
}

pub fn structure_matrix(fs: &[Observable], z: &PhasePoint) -> Result<StructureMatrix> {
    let k = fs.len();
    let chart = z.chart();
    // Natural magnitude of each bracket: the product of the canonical
    // gradient norms. An entry below threshold * that scale is cancellation
    // noise and is treated as an exact zero; the relative SVD threshold
    // alone cannot tell a numerically-zero matrix from a rank-deficient one.
    let mut grad_norms = Vec::with_capacity(k);
    for f in fs {
        let mut acc = 0.0;
        for c in 0..2 * chart.n_dof() {
            let v = require_finite(f.partial(c).eval(z.coords()))?;
            acc += v * v;
        }
        grad_norms.push(acc.sqrt());
    }
    let mut s = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in (i + 1)..k {
            let mut v = poisson_bracket(&fs[i], &fs[j], z, BracketScheme::Analytic)?;
            if v.abs() <= RANK_THRESHOLD * grad_norms[i] * grad_norms[j] {
                v = 0.0;
            }
            s[(i, j)] = v;
            s[(j, i)] = -v;
        }
    }
    let rank = matrix_rank(&s);
    Ok(StructureMatrix {
        entries: s,
        rank,
        corank: k - rank,
    })
}
