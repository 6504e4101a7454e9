//! Affine functions of the actions, `f = a^k(phi) I_k + b(phi)`, the only
//! classical functions the quantization represents exactly. Products of
//! actions with non-constant coefficients are deliberately not expressible:
//! the operator of a product differs from the product of operators.

use crate::error::{QuantizeError, Result};
use crate::fourier::FourierPoly;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineObservable {
    m: usize,
    /// Coefficients of the actions, one Fourier polynomial per I_k.
    a: Vec<FourierPoly>,
    /// Scalar part.
    b: FourierPoly,
}

impl AffineObservable {
    pub fn new(a: Vec<FourierPoly>, b: FourierPoly) -> Result<Self> {
        let m = b.m();
        if a.len() != m {
            return Err(QuantizeError::DimensionMismatch {
                want: m,
                got: a.len(),
            });
        }
        for poly in &a {
            if poly.m() != m {
                return Err(QuantizeError::DimensionMismatch {
                    want: m,
                    got: poly.m(),
                });
            }
            if !poly.is_real() {
                return Err(QuantizeError::NotReal);
            }
        }
        if !b.is_real() {
            return Err(QuantizeError::NotReal);
        }
        Ok(AffineObservable { m, a, b })
    }

    /// The action `I_k` itself.
    pub fn action(m: usize, k: usize) -> Result<Self> {
        if k >= m {
            return Err(QuantizeError::IndexOutOfRange { index: k, m });
        }
        let mut a = vec![FourierPoly::zero(m); m];
        a[k] = FourierPoly::constant(m, 1.0);
        Ok(AffineObservable {
            m,
            a,
            b: FourierPoly::zero(m),
        })
    }

    /// A pure scalar `b(phi)`.
    pub fn scalar(b: FourierPoly) -> Result<Self> {
        let m = b.m();
        Self::new(vec![FourierPoly::zero(m); m], b)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn action_coefficient(&self, k: usize) -> &FourierPoly {
        &self.a[k]
    }

    pub fn scalar_part(&self) -> &FourierPoly {
        &self.b
    }

    pub fn bandwidth(&self) -> i64 {
        self.a
            .iter()
            .map(FourierPoly::bandwidth)
            .max()
            .unwrap_or(0)
            .max(self.b.bandwidth())
    }

    /// Classical Poisson bracket on `(I_k, phi^k)` with `{I_k, phi^j} = delta`:
    /// `{f, g} = sum_k (df/dI_k dg/dphi^k - df/dphi^k dg/dI_k)`.
    /// The bracket of two affine functions is affine again.
    pub fn poisson_bracket(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(QuantizeError::DimensionMismatch {
                want: self.m,
                got: other.m,
            });
        }
        let m = self.m;
        // Action coefficients: sum_k (a^k d_k c^j - c^k d_k a^j).
        let mut a_out = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc = FourierPoly::zero(m);
            for k in 0..m {
                let term1 = self.a[k].mul(&other.a[j].derivative(k)?)?;
                let term2 = other.a[k].mul(&self.a[j].derivative(k)?)?;
                acc = acc.add(&term1)?.add(&term2.scale(-1.0))?;
            }
            a_out.push(acc);
        }
        // Scalar part: sum_k (a^k d_k d - c^k d_k b).
        let mut b_out = FourierPoly::zero(m);
        for k in 0..m {
            let term1 = self.a[k].mul(&other.b.derivative(k)?)?;
            let term2 = other.a[k].mul(&self.b.derivative(k)?)?;
            b_out = b_out.add(&term1)?.add(&term2.scale(-1.0))?;
        }
        AffineObservable::new(a_out, b_out)
    }
}
