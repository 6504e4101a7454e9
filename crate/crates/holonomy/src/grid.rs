//! Uniform grids on the m-torus with spectral analysis/synthesis.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{HolonomyError, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Complex values on the uniform grid `phi_j = 2 pi j / n` per axis,
/// row-major over axes.
#[derive(Debug, Clone)]
pub struct GridState {
    m: usize,
    n: usize,
    values: Vec<Complex64>,
}

impl GridState {
    pub fn new(m: usize, n: usize, values: Vec<Complex64>) -> Result<Self> {
        let want = n.pow(m as u32);
        if values.len() != want {
            return Err(HolonomyError::DimensionMismatch {
                want,
                got: values.len(),
            });
        }
        Ok(GridState { m, n, values })
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let total = n.pow(m as u32);
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; m];
        let mut phi = vec![0.0; m];
        for flat in 0..total {
            unflatten(flat, n, &mut idx);
            for (p, i) in phi.iter_mut().zip(&idx) {
                *p = TAU * *i as f64 / n as f64;
            }
            values.push(f(&phi));
        }
        GridState { m, n, values }
    }

    /// Synthesize a grid from Fourier modes.
    pub fn from_modes(m: usize, n: usize, modes: &[(Vec<i64>, Complex64)]) -> Result<Self> {
        for (k, _) in modes {
            if k.len() != m {
                return Err(HolonomyError::DimensionMismatch {
                    want: m,
                    got: k.len(),
                });
            }
        }
        Ok(Self::from_fn(m, n, |phi| eval_modes(modes, phi)))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    /// Angles of the node with flat index `flat`.
    pub fn node_angles(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0usize; self.m];
        unflatten(flat, self.n, &mut idx);
        idx.iter().map(|i| TAU * *i as f64 / self.n as f64).collect()
    }

    /// Grid norm squared `(2 pi)^m / n^m sum |v|^2`, the trapezoid rule for
    /// `int |psi|^2 d^m phi` (exact for trigonometric polynomials resolved
    /// by the grid).
    pub fn norm_sq(&self) -> f64 {
        let cell = (TAU / self.n as f64).powi(self.m as i32);
        cell * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// Forward DFT to mode coefficients with frequencies in `[-n/2, n/2)`.
    pub fn to_modes(&self) -> Vec<(Vec<i64>, Complex64)> {
        let mut data = self.values.clone();
        let n = self.n;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        // Transform along each axis in turn.
        for axis in 0..self.m {
            let stride = n.pow((self.m - 1 - axis) as u32);
            let blocks = data.len() / (n * stride);
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            for b in 0..blocks {
                for s in 0..stride {
                    let base = b * n * stride + s;
                    for j in 0..n {
                        line[j] = data[base + j * stride];
                    }
                    fft.process(&mut line);
                    for j in 0..n {
                        data[base + j * stride] = line[j];
                    }
                }
            }
        }
        let scale = 1.0 / data.len() as f64;
        let mut out = Vec::with_capacity(data.len());
        let mut idx = vec![0usize; self.m];
        for flat in 0..data.len() {
            unflatten(flat, n, &mut idx);
            let freq: Vec<i64> = idx
                .iter()
                .map(|j| {
                    let j = *j as i64;
                    if j < (n as i64 + 1) / 2 {
                        j
                    } else {
                        j - n as i64
                    }
                })
                .collect();
            // The DFT uses e^{-i j k}, so coefficient of e^{+i k phi} is the
            // forward transform at k, scaled.
            out.push((freq, data[flat] * scale));
        }
        out
    }
}

pub(crate) fn unflatten(mut flat: usize, n: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
}

/// Evaluate a mode list at an arbitrary angle vector.
pub fn eval_modes(modes: &[(Vec<i64>, Complex64)], phi: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in modes {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let phase: f64 = k.iter().zip(phi).map(|(kk, x)| *kk as f64 * x).sum();
        acc += c * Complex64::new(0.0, phase).exp();
    }
    acc
}

/// Largest |frequency| carrying more than `rel_tol` of the peak coefficient.
pub fn significant_bandwidth(modes: &[(Vec<i64>, Complex64)], rel_tol: f64) -> usize {
    let peak = modes.iter().map(|(_, c)| c.norm()).fold(0.0_f64, f64::max);
    if peak == 0.0 {
        return 0;
    }
    modes
        .iter()
        .filter(|(_, c)| c.norm() > rel_tol * peak)
        .flat_map(|(k, _)| k.iter().map(|v| v.unsigned_abs() as usize))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_round_trip() {
        let g = GridState::from_fn(1, 16, |phi| Complex64::new(0.0, 3.0 * phi[0]).exp());
        let modes = g.to_modes();
        for (k, c) in &modes {
            if k[0] == 3 {
                assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12, "stray coefficient at {k:?}");
            }
        }
        assert_eq!(significant_bandwidth(&modes, 1e-8), 3);
    }

    #[test]
    fn two_dimensional_round_trip() {
        let g = GridState::from_fn(2, 8, |phi| {
            Complex64::new(0.0, 2.0 * phi[0] - phi[1]).exp() * 0.5
        });
        let modes = g.to_modes();
        let back = GridState::from_modes(2, 8, &modes).unwrap();
        for (a, b) in g.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn norm_of_constant_is_total_measure() {
        let g = GridState::from_fn(1, 32, |_| Complex64::new((1.0 / TAU).sqrt(), 0.0));
        assert!((g.norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn interpolation_is_exact_for_resolved_modes() {
        let modes = vec![
            (vec![1], Complex64::new(0.3, 0.1)),
            (vec![-1], Complex64::new(0.3, -0.1)),
            (vec![4], Complex64::new(0.0, 0.2)),
        ];
        let g = GridState::from_modes(1, 16, &modes).unwrap();
        let back = g.to_modes();
        for x in [0.1, 2.7, 5.5] {
            let direct = eval_modes(&modes, &[x]);
            let interp = eval_modes(&back, &[x]);
            assert!((direct - interp).norm() < 1e-12);
        }
    }
}
