//! Structural invariants of the bracket machinery at sampled points.

mod common;

use actionangle_core::{
    hamiltonian_vector_field, integrate_hamilton, poisson_bracket, poisson_bracket_observable,
    BracketScheme, Method,
};
use common::*;
use proptest::prelude::*;

#[test]
fn antisymmetry_and_leibniz_at_sampled_points() {
    let chart = chart2();
    let pool = [
        obs(&chart, KEPLER_H),
        obs(&chart, KEPLER_M12),
        obs(&chart, KEPLER_A1),
        obs(&chart, KEPLER_A2),
        obs(&chart, "sin(q1)*p2 + exp(-q2^2)"),
        obs(&chart, "q1*q2*p1*p2"),
    ];
    for (i, z) in sample_points(&chart, 100, 11).iter().enumerate() {
        let f = &pool[i % pool.len()];
        let g = &pool[(i + 1) % pool.len()];
        let h = &pool[(i + 2) % pool.len()];

        let fg = poisson_bracket(f, g, z, BracketScheme::Analytic).unwrap();
        let gf = poisson_bracket(g, f, z, BracketScheme::Analytic).unwrap();
        assert_eq!(fg, -gf, "antisymmetry must be exact analytically");

        // {h, f*g} = {h,f} g + f {h,g}
        let prod = f.mul(g).unwrap();
        let lhs = poisson_bracket(h, &prod, z, BracketScheme::Analytic).unwrap();
        let rhs = poisson_bracket(h, f, z, BracketScheme::Analytic).unwrap()
            * g.eval_at(z).unwrap()
            + f.eval_at(z).unwrap() * poisson_bracket(h, g, z, BracketScheme::Analytic).unwrap();
        assert!(
            (lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()),
            "Leibniz defect {:.3e}",
            (lhs - rhs).abs()
        );
        let lhs_fd = poisson_bracket(h, &prod, z, BracketScheme::FiniteDiff { h: 1e-6 }).unwrap();
        assert!((lhs_fd - rhs).abs() < 1e-6 * (1.0 + rhs.abs()));
    }
}

#[test]
fn symbolic_gradients_match_central_differences() {
    let chart = chart2();
    let pool = [
        obs(&chart, KEPLER_H),
        obs(&chart, KEPLER_M12),
        obs(&chart, KEPLER_A1),
        obs(&chart, KEPLER_A2),
        obs(&chart, "atan2(q2, q1)"),
        obs(&chart, "sqrt(q1^2+q2^2)*cos(p1)"),
    ];
    for z in sample_points(&chart, 100, 23) {
        for f in &pool {
            let sym = f.grad_eval(z.coords()).unwrap();
            for i in 0..chart.dim() {
                let fd = f.finite_diff_partial(z.coords(), i, 1e-6);
                let scale = 1.0_f64.max(sym[i].abs()).max(fd.abs());
                assert!(
                    (sym[i] - fd).abs() <= 1e-6 * scale,
                    "partial {i} of {f}: sym {} vs fd {}",
                    sym[i],
                    fd
                );
            }
        }
    }
}

#[test]
fn bracket_equals_field_paired_with_gradient() {
    let chart = chart2();
    let f = obs(&chart, KEPLER_H);
    let g = obs(&chart, KEPLER_A1);
    for z in sample_points(&chart, 50, 37) {
        let lhs = poisson_bracket(&f, &g, &z, BracketScheme::Analytic).unwrap();
        let theta = hamiltonian_vector_field(&f, &z).unwrap();
        let rhs = theta.pair_with_gradient(&g, &z).unwrap();
        assert_eq!(lhs, rhs, "pairing identity must be exact analytically");
    }
}

#[test]
fn field_commutator_represents_the_bracket() {
    // [theta_f, theta_g] = theta_{f,g}, checked by the flow commutator
    //   z -> Phi_g^-s Phi_f^-s Phi_g^s Phi_f^s z = z + s^2 [theta_f, theta_g] + O(s^3).
    let chart = chart2();
    let f = obs(&chart, "0.5*(p1^2+p2^2) + q1*q2");
    let g = obs(&chart, "q1*p2 - q2*p1");
    let z = generic_point(&chart);

    let s = 1e-3;
    let flow = |h: &actionangle_core::Observable,
                from: &actionangle_core::PhasePoint,
                span: f64|
     -> actionangle_core::PhasePoint {
        // Tiny spans; a handful of RK4 steps is far below the s^3 floor.
        let traj = integrate_hamilton(h, from, (0.0, span), span / 8.0, Method::Rk4).unwrap();
        traj.last().1
    };
    // Backward flow of h equals forward flow of -h.
    let fm = f.neg();
    let gm = g.neg();
    let looped = flow(&gm, &flow(&fm, &flow(&g, &flow(&f, &z, s), s), s), s);

    let bracket_fg = poisson_bracket_observable(&f, &g, &chart).unwrap();
    let theta = hamiltonian_vector_field(&bracket_fg, &z).unwrap();

    for i in 0..2 {
        let dq = (looped.q(i) - z.q(i)) / (s * s);
        let dp = (looped.p(i) - z.p(i)) / (s * s);
        assert!(
            (dq - theta.dq[i]).abs() < 2e-2 * (1.0 + theta.dq[i].abs()),
            "dq{i}: loop {dq} vs field {}",
            theta.dq[i]
        );
        assert!(
            (dp - theta.dp[i]).abs() < 2e-2 * (1.0 + theta.dp[i].abs()),
            "dp{i}: loop {dp} vs field {}",
            theta.dp[i]
        );
    }
}

proptest! {
    #[test]
    fn antisymmetry_over_random_coordinates(
        q1 in -2.0..2.0f64, q2 in -2.0..2.0f64,
        p1 in -2.0..2.0f64, p2 in -2.0..2.0f64,
    ) {
        let chart = chart2();
        let f = obs(&chart, "sin(q1)*p2 + q2^2*p1");
        let g = obs(&chart, "cos(p1) + q1*p2^2");
        let z = chart.point(vec![q1, q2, p1, p2]).unwrap();
        let fg = poisson_bracket(&f, &g, &z, BracketScheme::Analytic).unwrap();
        let gf = poisson_bracket(&g, &f, &z, BracketScheme::Analytic).unwrap();
        prop_assert_eq!(fg, -gf);
    }

    #[test]
    fn parse_display_round_trip_on_random_trees(expr in expr_strategy()) {
        let chart = chart2();
        if let Ok(f) = actionangle_core::parse_observable(&expr, &chart) {
            let printed = f.to_string();
            let back = actionangle_core::parse_observable(&printed, &chart).unwrap();
            prop_assert_eq!(f, back);
        }
    }
}

fn expr_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("q1".to_string()),
        Just("q2".to_string()),
        Just("p1".to_string()),
        Just("p2".to_string()),
        (0..100u32).prop_map(|k| format!("{}.{:02}", k / 10, k % 100)),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/({b})")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("exp({a})")),
            inner.clone().prop_map(|a| format!("sqrt({a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("atan2({a}, {b})")),
            (inner, -3..4i32).prop_map(|(a, r)| format!("({a})^{r}")),
        ]
    })
}
