//! The named integrals of the planar two-body problem with potential `-1/r`,
//! as observables on the 4-dimensional chart `(q1, q2, p1, p2)`.

use actionangle_core::{parse_observable, Observable, PhaseChart, PhasePoint};

use crate::error::Result;

const H_TEXT: &str = "0.5*(p1^2+p2^2) - 1/(q1^2+q2^2)^0.5";
const M12_TEXT: &str = "q1*p2 - q2*p1";
const A1_TEXT: &str = "q1*(p1^2+p2^2) - p1*(p1*q1+p2*q2) - q1/(q1^2+q2^2)^0.5";
const A2_TEXT: &str = "q2*(p1^2+p2^2) - p2*(p1*q1+p2*q2) - q2/(q1^2+q2^2)^0.5";

/// Catalog of integrals of motion.
///
/// `h` is the Hamiltonian, `m12` the angular momentum and `(a1, a2)` the
/// Runge-Lenz vector. On the bound region the rescalings `l_i = a_i/sqrt(-2h)`
/// close the algebra so(3); on the unbound region `k_i = a_i/sqrt(2h)` close
/// so(2,1). The sign-flipped triples `f = (-l1, -l2, -m12)` and
/// `s = (-k1, -k2, -m12)` are the momentum-map components used by the
/// action-angle charts.
#[derive(Debug, Clone)]
pub struct KeplerCatalog {
    pub chart: PhaseChart,
    pub h: Observable,
    pub m12: Observable,
    pub a1: Observable,
    pub a2: Observable,
    pub l1: Observable,
    pub l2: Observable,
    pub k1: Observable,
    pub k2: Observable,
    pub f: [Observable; 3],
    pub s: [Observable; 3],
}

/// Build the catalog. All members carry symbolic gradients.
pub fn kepler_observables() -> KeplerCatalog {
    let chart = PhaseChart::new(2);
    let h = parse_observable(H_TEXT, &chart).expect("fixed formula parses");
    let m12 = parse_observable(M12_TEXT, &chart).expect("fixed formula parses");
    let a1 = parse_observable(A1_TEXT, &chart).expect("fixed formula parses");
    let a2 = parse_observable(A2_TEXT, &chart).expect("fixed formula parses");

    let sqrt_neg_2h = h.scale(-2.0).sqrt();
    let sqrt_2h = h.scale(2.0).sqrt();
    let l1 = a1.div(&sqrt_neg_2h).expect("same chart");
    let l2 = a2.div(&sqrt_neg_2h).expect("same chart");
    let k1 = a1.div(&sqrt_2h).expect("same chart");
    let k2 = a2.div(&sqrt_2h).expect("same chart");

    let f = [l1.neg(), l2.neg(), m12.neg()];
    let s = [k1.neg(), k2.neg(), m12.neg()];

    KeplerCatalog {
        chart,
        h,
        m12,
        a1,
        a2,
        l1,
        l2,
        k1,
        k2,
        f,
        s,
    }
}

impl KeplerCatalog {
    /// |A|^2 = A1^2 + A2^2 evaluated at a point.
    pub fn a_squared(&self, z: &PhasePoint) -> Result<f64> {
        let a1 = self.a1.eval_at(z)?;
        let a2 = self.a2.eval_at(z)?;
        Ok(a1 * a1 + a2 * a2)
    }

    /// M^2 = M12^2 evaluated at a point.
    pub fn m_squared(&self, z: &PhasePoint) -> Result<f64> {
        let m = self.m12.eval_at(z)?;
        Ok(m * m)
    }

    /// Residual of the identity `2 M^2 H = A^2 - 1`.
    pub fn energy_identity_residual(&self, z: &PhasePoint) -> Result<f64> {
        let h = self.h.eval_at(z)?;
        Ok((2.0 * self.m_squared(z)? * h - (self.a_squared(z)? - 1.0)).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_point_values() {
        let cat = kepler_observables();
        let z = cat.chart.point(vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((cat.h.eval_at(&z).unwrap() + 0.5).abs() < 1e-15);
        assert!((cat.m12.eval_at(&z).unwrap() - 1.0).abs() < 1e-15);
        assert!(cat.a1.eval_at(&z).unwrap().abs() < 1e-15);
        assert!(cat.a2.eval_at(&z).unwrap().abs() < 1e-15);
        // H = (A^2 - 1)/(2 M^2) = -0.5 here.
        assert!(cat.energy_identity_residual(&z).unwrap() < 1e-15);
    }

    #[test]
    fn unbound_point_values() {
        let cat = kepler_observables();
        let z = cat.chart.point(vec![1.0, 0.0, 0.0, 2.0]).unwrap();
        assert!((cat.h.eval_at(&z).unwrap() - 1.0).abs() < 1e-15);
        assert!((cat.m12.eval_at(&z).unwrap() - 2.0).abs() < 1e-15);
        assert!((cat.a1.eval_at(&z).unwrap() - 3.0).abs() < 1e-15);
        assert!(cat.a2.eval_at(&z).unwrap().abs() < 1e-15);
        let k1 = cat.k1.eval_at(&z).unwrap();
        assert!((k1 - 3.0 / 2.0_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn energy_identity_at_sampled_points() {
        let cat = kepler_observables();
        // Identity 2 M^2 H = A^2 - 1 away from the collision set. The
        // residual is roundoff and scales with A^2, hence the scale factor.
        let mut count = 0;
        let mut k = 0u64;
        while count < 1000 {
            k += 1;
            let t = k as f64;
            let q1 = 0.2 + 4.8 * frac(t * 0.754877666);
            let q2 = -2.0 + 4.0 * frac(t * 0.569840296);
            let p1 = -3.0 + 6.0 * frac(t * 0.362437086);
            let p2 = -3.0 + 6.0 * frac(t * 0.138197659);
            let r = (q1 * q1 + q2 * q2).sqrt();
            if !(0.2..=5.0).contains(&r) || (p1 * p1 + p2 * p2) > 9.0 {
                continue;
            }
            count += 1;
            let z = cat.chart.point(vec![q1, q2, p1, p2]).unwrap();
            let scale = 1.0_f64.max(cat.a_squared(&z).unwrap());
            assert!(
                cat.energy_identity_residual(&z).unwrap() < 1e-13 * scale,
                "identity failed at ({q1},{q2},{p1},{p2})"
            );
        }
    }

    fn frac(x: f64) -> f64 {
        x - x.floor()
    }
}
