//! Transport-level invariants: linearity of the action equation, the first
//! integral of the sine connection, parametrization independence, and
//! unitarity of the grid transport.

use actionangle_holonomy::{
    classical_holonomy, quantum_holonomy, reparametrization_check, ConnectionField, GridState,
    HolonomyState, ParameterPath, Reparametrization,
};
use num_complex::Complex64;

fn sin_connection() -> ConnectionField {
    ConnectionField::parse(1, 1, &[vec!["sin(phi1)".to_string()]]).unwrap()
}

fn unit_path(t_end: f64) -> ParameterPath {
    ParameterPath::parse(t_end, &["t".to_string()], &["1".to_string()], vec![]).unwrap()
}

#[test]
fn final_actions_depend_linearly_on_initial_actions() {
    let conn = sin_connection();
    let path = unit_path(1.5);
    let phi0 = 0.9;
    let run = |i0: f64| -> f64 {
        let s0 = HolonomyState::new(vec![i0], vec![phi0]);
        classical_holonomy(&conn, &path, &s0, 1e-3).unwrap().last_raw().0[0]
    };
    let a = run(1.0);
    let b = run(-0.7);
    let combined = run(1.0 - 0.7);
    assert!(
        (combined - (a + b)).abs() < 1e-10,
        "superposition residual {:.3e}",
        (combined - (a + b)).abs()
    );
    // And homogeneity.
    let scaled = run(3.0);
    assert!((scaled - 3.0 * a).abs() < 1e-10);
}

#[test]
fn sine_connection_first_integral() {
    // I sin(phi) is conserved by the transport equations.
    let conn = sin_connection();
    let path = unit_path(2.0);
    let s0 = HolonomyState::new(vec![1.0], vec![std::f64::consts::FRAC_PI_2]);
    let traj = classical_holonomy(&conn, &path, &s0, 1e-4).unwrap();
    let c0 = s0.actions[0] * s0.angles[0].sin();
    let mut drift = 0.0_f64;
    for i in 0..traj.len() {
        let c = traj.actions[i][0] * traj.angles_raw[i][0].sin();
        drift = drift.max((c - c0).abs());
    }
    assert!(drift < 1e-9, "invariant drift {drift:.3e}");
}

#[test]
fn action_reaches_cosh_after_unit_displacement() {
    let conn = sin_connection();
    let path = unit_path(1.0);
    let s0 = HolonomyState::new(vec![1.0], vec![std::f64::consts::FRAC_PI_2]);
    let traj = classical_holonomy(&conn, &path, &s0, 1e-3).unwrap();
    let (i_f, _) = traj.last_raw();
    assert!(
        (i_f[0] - 1.0_f64.cosh()).abs() < 1e-8,
        "I(1) = {} vs cosh(1)",
        i_f[0]
    );
}

#[test]
fn endpoint_is_parametrization_independent() {
    let conn = sin_connection();
    let path = unit_path(1.0);
    let s0 = HolonomyState::new(vec![1.0], vec![0.6]);

    let quadratic = Reparametrization::parse_expression(1.0, "t^2", "2*t").unwrap();
    let dev = reparametrization_check(&conn, &path, &quadratic, &s0, 1e-4).unwrap();
    assert!(dev < 1e-8, "quadratic reparametrization deviation {dev:.3e}");

    let kinked =
        Reparametrization::piecewise_linear(vec![(0.0, 0.0), (0.4, 0.7), (1.0, 1.0)]).unwrap();
    let dev = reparametrization_check(&conn, &path, &kinked, &s0, 1e-4).unwrap();
    assert!(dev < 1e-7, "piecewise reparametrization deviation {dev:.3e}");
}

#[test]
fn grid_transport_is_unitary_for_the_sine_connection() {
    let conn = sin_connection();
    let path = unit_path(1.0);
    let n = 256;
    let psi0 = GridState::from_fn(1, n, |_| {
        Complex64::new(1.0 / std::f64::consts::TAU.sqrt(), 0.0)
    });
    assert!((psi0.norm_sq() - 1.0).abs() < 1e-14);
    let out = quantum_holonomy(&conn, &path, &psi0, &[0.0], 1e-3).unwrap();
    assert!(
        (out.norm_sq() - 1.0).abs() < 1e-10,
        "norm defect {:.3e}",
        (out.norm_sq() - 1.0).abs()
    );
}

#[test]
fn two_angle_principal_transport_matches_the_multiplier() {
    // m = d = 2 principal connection; every Fourier mode picks up exactly
    // the Berry multiplier phase.
    let conn = ConnectionField::parse(
        2,
        2,
        &[
            vec!["0.3".to_string(), "0.1".to_string()],
            vec!["-0.2".to_string(), "0.7".to_string()],
        ],
    )
    .unwrap();
    let path = ParameterPath::parse(
        1.0,
        &["t".to_string(), "2*t".to_string()],
        &["1".to_string(), "2".to_string()],
        vec![],
    )
    .unwrap();
    let modes: [[i64; 2]; 3] = [[1, 0], [0, -2], [3, 1]];
    for n_mode in modes {
        let psi0 = GridState::from_fn(2, 16, |phi| {
            Complex64::new(0.0, n_mode[0] as f64 * phi[0] + n_mode[1] as f64 * phi[1]).exp()
        });
        let out = quantum_holonomy(&conn, &path, &psi0, &[0.0, 0.0], 1e-2).unwrap();
        let expected = actionangle_holonomy::berry_multiplier(&conn, &path, &n_mode).unwrap();
        for (flat, v) in out.values().iter().enumerate() {
            let phi = out.node_angles(flat);
            let want = expected
                * Complex64::new(
                    0.0,
                    n_mode[0] as f64 * phi[0] + n_mode[1] as f64 * phi[1],
                )
                .exp();
            assert!(
                (v - want).norm() < 1e-12,
                "mode {n_mode:?}, node {flat}: got {v}, want {want}"
            );
        }
    }
}

#[test]
fn half_integer_offsets_transport_unitarily() {
    let conn = sin_connection();
    let path = unit_path(1.0);
    let n = 128;
    let psi0 = GridState::from_fn(1, n, |phi| {
        Complex64::new(phi[0].cos() * 0.3 + 0.5, 0.2 * phi[0].sin())
    });
    let base = psi0.norm_sq();
    for lambda in [[0.5], [-0.5]] {
        let out = quantum_holonomy(&conn, &path, &psi0, &lambda, 1e-3).unwrap();
        assert!(
            (out.norm_sq() - base).abs() < 1e-10 * (1.0 + base),
            "norm defect for lambda {lambda:?}"
        );
    }
}
