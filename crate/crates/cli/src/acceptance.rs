//! The acceptance suite: seven criterion bundles, each runnable on its own,
//! shared by the `report-all` subcommand and the acceptance test target.

use actionangle_core::{
    conservation_report, independence_rank, integrate_hamilton, jacobi_defect, poisson_bracket,
    structure_matrix, BracketScheme, Method, NESTED_FD_STEP,
};
use actionangle_holonomy::{
    berry_multiplier, classical_holonomy, quantum_holonomy, r_isomorphism,
    reparametrization_check, ConnectionField, GridState, HolonomyState, ParameterPath,
    Reparametrization,
};
use actionangle_kepler::{
    kepler_observables, kepler_time, orbit_scan, perihelion_state, solve_kepler,
    verify_algebra, verify_darboux_triplet, Regime, DEFAULT_REGIME_TOL,
};
use actionangle_quantize::{
    action_operator, dirac_residual, schrodinger_operator, ActionPolynomial, TorusState,
};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::acceptance_support::{quadratic_action_hamiltonian, random_affine, random_state};
use crate::report::{Check, CriterionReport};
use crate::sampling::{rng_from_seed, sample_regime_points};

const TAU: f64 = std::f64::consts::TAU;

/// 1. Analytic bracket relations and Casimir identities of the integrals at
///    1000 sampled points per regime, all below 1e-12, with the full so(3) and
///    so(2,1) bracket tables reproduced entry-wise.
pub fn kepler_algebra_suite(seed: u64) -> CriterionReport {
    let cat = kepler_observables();
    let mut checks = Vec::new();
    for (regime, label) in [(Regime::UMinus, "bound"), (Regime::UPlus, "unbound")] {
        let points = sample_regime_points(&cat, seed ^ regime_salt(regime), 1000, regime);
        let worst: Vec<(f64, f64)> = points
            .par_iter()
            .map(|z| {
                let res = verify_algebra(&cat, z, DEFAULT_REGIME_TOL).expect("sampled in regime");
                let bracket_worst = res.bracket_m_a[0]
                    .max(res.bracket_m_a[1])
                    .max(res.bracket_a1_a2)
                    .max(res.bracket_m_x[0])
                    .max(res.bracket_m_x[1])
                    .max(res.bracket_x1_x2)
                    .max(res.casimir);
                (bracket_worst, res.so_matrix)
            })
            .collect();
        let bracket_max = worst.iter().map(|w| w.0).fold(0.0_f64, f64::max);
        let so_max = worst.iter().map(|w| w.1).fold(0.0_f64, f64::max);
        checks.push(Check::below(
            format!("{label}_bracket_and_casimir_residual_max"),
            bracket_max,
            1e-12,
        ));
        checks.push(Check::below(
            format!("{label}_algebra_table_residual_max"),
            so_max,
            1e-12,
        ));
    }
    CriterionReport::new("kepler algebra suite", checks)
}

fn regime_salt(regime: Regime) -> u64 {
    match regime {
        Regime::UMinus => 0x5a5a,
        Regime::UPlus => 0xa5a5,
        Regime::Excluded => 0,
    }
}

/// 2. Independence rank 3 and structure-matrix corank 1 for the bound-region
///    triple at 100 points; corank 2 for the involutive pair.
pub fn structure_suite(seed: u64) -> CriterionReport {
    let cat = kepler_observables();
    let points = sample_regime_points(&cat, seed ^ 0x7c31, 100, Regime::UMinus);
    let triple = [cat.m12.clone(), cat.l1.clone(), cat.l2.clone()];
    let pair = [cat.h.clone(), cat.m12.clone()];
    let failures: Vec<(usize, usize, usize)> = points
        .par_iter()
        .map(|z| {
            let rank = independence_rank(&triple, z).expect("gradients finite");
            let s = structure_matrix(&triple, z).expect("brackets finite");
            let s2 = structure_matrix(&pair, z).expect("brackets finite");
            (
                usize::from(rank != 3),
                usize::from(s.corank != 1),
                usize::from(s2.corank != 2),
            )
        })
        .collect();
    let rank_failures: usize = failures.iter().map(|f| f.0).sum();
    let corank_failures: usize = failures.iter().map(|f| f.1).sum();
    let pair_failures: usize = failures.iter().map(|f| f.2).sum();
    CriterionReport::new(
        "superintegrable structure suite",
        vec![
            Check::at_most("triple_rank_failures", rank_failures as f64, 0.0),
            Check::at_most("triple_corank_failures", corank_failures as f64, 0.0),
            Check::at_most("involutive_pair_corank_failures", pair_failures as f64, 0.0),
        ],
    )
}

/// 3. Orbit closure after one period at the stated step, conservation drift
///    of the integrals, and the nominal convergence orders of both methods.
pub fn dynamics_suite(_seed: u64) -> CriterionReport {
    let cat = kepler_observables();
    let z0 = perihelion_state(&cat, 1.0, 0.5).expect("valid elements");

    let traj = integrate_hamilton(&cat.h, &z0, (0.0, TAU), 1e-4, Method::Rk4)
        .expect("bound orbit stays regular");
    let (_, zf) = traj.last();
    let closure = zf
        .coords()
        .iter()
        .zip(z0.coords())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);

    let cons = conservation_report(
        &cat.h,
        &[cat.m12.clone(), cat.a1.clone(), cat.a2.clone()],
        &traj,
    )
    .expect("evaluable along orbit");
    let drift = cons.drifts.iter().cloned().fold(0.0_f64, f64::max);

    let endpoint_error = |step: f64, method: Method| -> f64 {
        let t = integrate_hamilton(&cat.h, &z0, (0.0, TAU), step, method).expect("regular");
        let (_, end) = t.last();
        end.coords()
            .iter()
            .zip(z0.coords())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max)
    };
    let rk4_slope = fit_slope(
        &[TAU / 1000.0, TAU / 2000.0, TAU / 4000.0],
        Method::Rk4,
        &endpoint_error,
    );
    let midpoint_slope = fit_slope(
        &[TAU / 2000.0, TAU / 4000.0, TAU / 8000.0],
        Method::ImplicitMidpoint,
        &endpoint_error,
    );

    CriterionReport::new(
        "dynamics suite",
        vec![
            Check::below("orbit_closure_after_one_period", closure, 1e-5),
            Check::below("integral_conservation_drift", drift, 1e-7),
            Check::at_most("rk4_order_defect", (rk4_slope - 4.0).abs(), 0.3),
            Check::at_most("midpoint_order_defect", (midpoint_slope - 2.0).abs(), 0.3),
        ],
    )
}

fn fit_slope(steps: &[f64], method: Method, f: &dyn Fn(f64, Method) -> f64) -> f64 {
    let xs: Vec<f64> = steps.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = steps.iter().map(|s| f(*s, method).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// 4. Along the bound orbit the chart block is constant, the cyclic time is
///    linear, the time-law round trip closes, and the Darboux triplet brackets
///    vanish at sampled points.
pub fn chart_suite(seed: u64) -> CriterionReport {
    let cat = kepler_observables();
    let z0 = perihelion_state(&cat, 1.0, 0.5).expect("valid elements");
    let scan = orbit_scan(&cat, &z0, TAU, 1e-4, DEFAULT_REGIME_TOL).expect("regular orbit");
    let first = &scan.states[0];
    let mut block_drift = 0.0_f64;
    let mut alpha_defect = 0.0_f64;
    for (i, (t, _)) in scan.trajectory.samples().enumerate() {
        let s = &scan.states[i];
        block_drift = block_drift.max((s.action - first.action).abs());
        block_drift = block_drift.max((s.x1 - first.x1).abs());
        block_drift = block_drift.max(wrapped_distance(s.angle, first.angle));
        alpha_defect =
            alpha_defect.max(wrapped_distance(s.time_angle, first.time_angle + t));
    }

    let mut round_trip = 0.0_f64;
    for alpha in [0.1, 1.0, 3.0, 4.9, 6.1] {
        let phi = solve_kepler(alpha, 1.0, 0.5, Regime::UMinus).expect("converges");
        let back = kepler_time(phi, 1.0, 0.5, Regime::UMinus).expect("bound regime");
        round_trip = round_trip.max((back - alpha).abs());
    }

    let points = sample_regime_points(&cat, seed ^ 0x11d7, 100, Regime::UMinus);
    let darboux = points
        .par_iter()
        .map(|z| {
            verify_darboux_triplet(&cat, z, DEFAULT_REGIME_TOL)
                .expect("bound regime")
                .max()
        })
        .reduce(|| 0.0, f64::max);

    CriterionReport::new(
        "chart suite",
        vec![
            Check::below("action_angle_block_drift", block_drift, 1e-6),
            Check::below("cyclic_time_linearity_defect", alpha_defect, 1e-5),
            Check::below("time_law_round_trip", round_trip, 1e-10),
            Check::below("darboux_triplet_residual_max", darboux, 1e-12),
        ],
    )
}

fn wrapped_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// 5. Dirac condition and Hermiticity on random affine pairs, and spectra of
///    polynomial Hamiltonians up to degree 4 against the operator route.
pub fn quantization_suite(seed: u64) -> CriterionReport {
    let mut rng = rng_from_seed(seed ^ 0x9e37);
    let mut dirac_max = 0.0_f64;
    let mut hermiticity_max = 0.0_f64;
    for trial in 0..50 {
        let m = 1 + (trial % 2);
        let lambda: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
        let f = random_affine(&mut rng, m, 5);
        let g = random_affine(&mut rng, m, 5);
        let raw = random_state(&mut rng, m, &lambda);
        let probe = raw.scale(Complex64::new(1.0 / raw.norm_sq().sqrt(), 0.0));
        dirac_max = dirac_max.max(dirac_residual(&f, &g, &probe).expect("same m"));

        let chi_raw = random_state(&mut rng, m, &lambda);
        let chi = chi_raw.scale(Complex64::new(1.0 / chi_raw.norm_sq().sqrt(), 0.0));
        let lhs = schrodinger_operator(&f, &probe).expect("same m").inner(&chi);
        let rhs = probe.inner(&schrodinger_operator(&f, &chi).expect("same m"));
        hermiticity_max = hermiticity_max.max((lhs - rhs).norm());
    }

    // Spectrum: eigenvalues from direct substitution against the operator
    // route (compositions of action operators term by term), polynomial
    // degrees 1 through 4 plus random coefficients.
    let mut spectrum_defect = 0.0_f64;
    let fixed: [(&str, usize); 6] = [
        ("I1", 1),
        ("I1^2", 1),
        ("I1^3 - 2*I1", 1),
        ("I1^4 + 0.5*I1^2 - 3", 1),
        ("I1^2*I2^2 + I2", 2),
        ("I1*I2^3 - I1^2 + 4", 2),
    ];
    for (text, m) in fixed {
        let h = ActionPolynomial::parse(text, m).expect("fixed polynomial parses");
        let lambda: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
        let mode_box: Vec<(i64, i64)> = (0..m).map(|_| (-3i64, 3i64)).collect();
        let rows = actionangle_quantize::spectrum(&h, &lambda, &mode_box).expect("valid box");
        for (n, e) in rows {
            let psi = TorusState::basis(m, &lambda, &n).expect("mode fits");
            let h_psi = apply_polynomial_operator(&h, &psi);
            let e_op = h_psi.inner(&psi).re;
            spectrum_defect = spectrum_defect.max((e_op - e).abs() / (1.0 + e.abs()));
        }
    }

    CriterionReport::new(
        "quantization suite",
        vec![
            Check::below("dirac_residual_max", dirac_max, 1e-13),
            Check::below("hermiticity_defect_max", hermiticity_max, 1e-13),
            Check::below("spectrum_operator_route_defect", spectrum_defect, 1e-12),
        ],
    )
}

fn apply_polynomial_operator(h: &ActionPolynomial, psi: &TorusState) -> TorusState {
    let mut acc = TorusState::zero(psi.m(), psi.lambda()).expect("same shape");
    for (exps, c) in h.terms() {
        let mut term = psi.scale(Complex64::new(*c, 0.0));
        for (k, e) in exps.iter().enumerate() {
            for _ in 0..*e {
                term = action_operator(k, &term).expect("index in range");
            }
        }
        acc = acc.add(&term).expect("same shape");
    }
    acc
}

/// 6. Holonomy: the sine-connection first integral and closed-form endpoint,
///    parametrization independence, Berry multiplier against grid transport,
///    transport unitarity, and invariance of action means under the isometry.
pub fn holonomy_suite(seed: u64) -> CriterionReport {
    let conn = ConnectionField::parse(1, 1, &[vec!["sin(phi1)".to_string()]])
        .expect("valid coefficients");
    let path2 = ParameterPath::parse(2.0, &["t".into()], &["1".into()], vec![]).expect("valid");
    let s0 = HolonomyState::new(vec![1.0], vec![std::f64::consts::FRAC_PI_2]);

    // First integral I sin(phi) over displacement 2 at step 1e-4.
    let traj = classical_holonomy(&conn, &path2, &s0, 1e-4).expect("smooth transport");
    let c0 = s0.actions[0] * s0.angles[0].sin();
    let mut invariant_drift = 0.0_f64;
    for i in 0..traj.len() {
        let c = traj.actions[i][0] * traj.angles_raw[i][0].sin();
        invariant_drift = invariant_drift.max((c - c0).abs());
    }

    // Endpoint after unit displacement.
    let path1 = ParameterPath::parse(1.0, &["t".into()], &["1".into()], vec![]).expect("valid");
    let traj1 = classical_holonomy(&conn, &path1, &s0, 1e-4).expect("smooth transport");
    let cosh_defect = (traj1.last_raw().0[0] - 1.0_f64.cosh()).abs();

    // Reparametrization independence.
    let repar = Reparametrization::parse_expression(1.0, "t^2", "2*t").expect("valid");
    let repar_dev =
        reparametrization_check(&conn, &path1, &repar, &s0, 1e-4).expect("smooth transport");

    // Berry multiplier against the grid transport, principal connection.
    let principal =
        ConnectionField::parse(1, 1, &[vec!["0.5".to_string()]]).expect("valid constants");
    let path_pi =
        ParameterPath::parse(std::f64::consts::PI, &["t".into()], &["1".into()], vec![])
            .expect("valid");
    let mut berry_defect = 0.0_f64;
    for n_mode in [-2i64, 1, 3] {
        let psi0 = GridState::from_fn(1, 64, |phi| {
            Complex64::new(0.0, n_mode as f64 * phi[0]).exp()
        });
        let out =
            quantum_holonomy(&principal, &path_pi, &psi0, &[0.0], 1e-3).expect("transport");
        let expected = berry_multiplier(&principal, &path_pi, &[n_mode]).expect("principal");
        for (flat, v) in out.values().iter().enumerate() {
            let phi = out.node_angles(flat);
            let want = expected * Complex64::new(0.0, n_mode as f64 * phi[0]).exp();
            berry_defect = berry_defect.max((v - want).norm());
        }
    }

    // Unitarity of the sine-connection transport at N = 256.
    let psi0 = GridState::from_fn(1, 256, |_| {
        Complex64::new(1.0 / TAU.sqrt(), 0.0)
    });
    let out = quantum_holonomy(&conn, &path1, &psi0, &[0.0], 1e-3).expect("transport");
    let unitarity_defect = (out.norm_sq() - psi0.norm_sq()).abs();

    // Action means are blind to the isometry.
    let mut rng = rng_from_seed(seed ^ 0x51f1);
    let h = quadratic_action_hamiltonian();
    let mut iso_defect = 0.0_f64;
    for _ in 0..20 {
        let state = random_state(&mut rng, 1, &[0.25]);
        let mapped = r_isomorphism(&state, &h, rng.gen_range(0.0..5.0)).expect("same m");
        let before = action_operator(0, &state).expect("m=1").inner(&state);
        let after = action_operator(0, &mapped).expect("m=1").inner(&mapped);
        iso_defect = iso_defect.max((before - after).norm() / (1.0 + before.norm()));
    }

    CriterionReport::new(
        "holonomy suite",
        vec![
            Check::below("sine_connection_invariant_drift", invariant_drift, 1e-9),
            Check::below("action_endpoint_vs_closed_form", cosh_defect, 1e-8),
            Check::below("reparametrization_deviation", repar_dev, 1e-8),
            Check::below("berry_multiplier_vs_grid_phase", berry_defect, 1e-10),
            Check::below("grid_transport_unitarity_defect", unitarity_defect, 1e-10),
            Check::below("isometry_action_mean_defect", iso_defect, 1e-14),
        ],
    )
}

/// 7. Nested finite-difference Jacobi defects and symbolic-vs-numeric
///    gradient agreement on the catalog observables at sampled points.
pub fn hygiene_suite(seed: u64) -> CriterionReport {
    let cat = kepler_observables();
    let points = sample_regime_points(&cat, seed ^ 0x3b41, 100, Regime::UMinus);
    let catalog = [
        cat.h.clone(),
        cat.m12.clone(),
        cat.a1.clone(),
        cat.a2.clone(),
        cat.l1.clone(),
        cat.l2.clone(),
    ];

    let jacobi_max = points
        .par_iter()
        .enumerate()
        .map(|(i, z)| {
            let f = &catalog[i % 3 + 1]; // rotate over m12, a1, a2
            let g = &catalog[(i + 1) % 3 + 1];
            let h = &catalog[(i + 2) % 3 + 1];
            jacobi_defect(f, g, h, z, BracketScheme::FiniteDiff { h: NESTED_FD_STEP })
                .expect("regular point")
                .abs()
        })
        .reduce(|| 0.0, f64::max);

    let grad_max = points
        .par_iter()
        .map(|z| {
            let mut worst = 0.0_f64;
            for f in &catalog {
                let sym = f.grad_eval(z.coords()).expect("regular point");
                for i in 0..z.coords().len() {
                    let fd = f.finite_diff_partial(z.coords(), i, 1e-6);
                    let scale = 1.0_f64.max(sym[i].abs()).max(fd.abs());
                    worst = worst.max((sym[i] - fd).abs() / scale);
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);

    // The analytic route must agree with the antisymmetric convention at the
    // same points (cheap cross-check of the two bracket paths).
    let scheme_gap = points
        .par_iter()
        .map(|z| {
            let analytic =
                poisson_bracket(&cat.m12, &cat.a1, z, BracketScheme::Analytic).expect("regular");
            let fd = poisson_bracket(&cat.m12, &cat.a1, z, BracketScheme::FiniteDiff { h: 1e-6 })
                .expect("regular");
            (analytic - fd).abs() / (1.0 + analytic.abs())
        })
        .reduce(|| 0.0, f64::max);

    CriterionReport::new(
        "jacobi and gradient hygiene",
        vec![
            Check::below("nested_jacobi_defect_max", jacobi_max, 1e-6),
            Check::below("gradient_agreement_max", grad_max, 1e-6),
            Check::below("bracket_scheme_agreement_max", scheme_gap, 1e-6),
        ],
    )
}

/// Run all seven criteria in order.
pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    vec![
        kepler_algebra_suite(seed),
        structure_suite(seed),
        dynamics_suite(seed),
        chart_suite(seed),
        quantization_suite(seed),
        holonomy_suite(seed),
        hygiene_suite(seed),
    ]
}
