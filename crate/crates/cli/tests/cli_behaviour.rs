//! End-to-end behaviour of the command layer: deterministic reports, the
//! exit-code contract, and the artifact formats of the worked examples.

use std::process::Command;

use actionangle_cli::commands;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_actionangle"))
}

#[test]
fn identical_seed_gives_byte_identical_reports() {
    let a = commands::kepler_verify(40, 7, 1e-12).unwrap();
    let b = commands::kepler_verify(40, 7, 1e-12).unwrap();
    assert_eq!(a.artifact, b.artifact);
    assert!(a.pass);
    let c = commands::kepler_verify(40, 8, 1e-12).unwrap();
    assert_ne!(a.artifact, c.artifact, "different seed, different sample");
}

#[test]
fn verify_report_shape_and_pass() {
    let out = commands::kepler_verify(100, 7, 1e-12).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out.artifact).unwrap();
    assert_eq!(doc["command"], "kepler-verify");
    assert_eq!(doc["pass"], true);
    let points = doc["points"].as_array().unwrap();
    assert_eq!(points.len(), 100);
    for p in points {
        assert!(p["regime"] == "u_minus" || p["regime"] == "u_plus");
        assert!(p["residuals"]["bracket_a1_a2"].as_f64().unwrap() < 1e-12);
        assert!(p["identities"]["casimir"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn spectrum_example_rows() {
    let out = commands::quantize_spectrum("I1^2", "0", "-2:2").unwrap();
    let lines: Vec<&str> = out.artifact.lines().collect();
    assert_eq!(lines[0], "n1,E");
    let energies: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(energies, vec![4.0, 1.0, 0.0, 1.0, 4.0]);
}

#[test]
fn classical_transport_csv_keeps_the_first_integral() {
    let config = r#"{
        "connection": {"m": 1, "d": 1, "coeffs": [["sin(phi1)"]]},
        "path": {"T": 1.0, "components": ["t"], "derivatives": ["1"]},
        "initial": {"I": [1.0], "phi": [1.5707963267948966]},
        "lambda": [0.0],
        "step": 1e-4
    }"#;
    let out = commands::holonomy_classical(config).unwrap();
    let mut lines = out.artifact.lines();
    assert_eq!(lines.next().unwrap(), "t,I1,phi1");
    let mut worst = 0.0_f64;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let c = cols[1] * cols[2].sin();
        worst = worst.max((c - 1.0).abs());
    }
    assert!(worst < 1e-9, "first-integral drift {worst:.3e}");
}

#[test]
fn quantum_transport_emits_a_state_document() {
    let config = r#"{
        "connection": {"m": 1, "d": 1, "coeffs": [["0.5"]]},
        "path": {"T": 3.141592653589793, "components": ["t"], "derivatives": ["1"]},
        "initial": {"grid_N": 32, "psi0_modes": [{"n": [1], "re": 1.0, "im": 0.0}]},
        "lambda": [0.0],
        "step": 1e-3
    }"#;
    let out = commands::holonomy_quantum(config).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out.artifact).unwrap();
    let state = actionangle_quantize::TorusState::from_json(&doc).unwrap();
    // exp(-i pi/2) = -i on the n = 1 mode.
    let amp = state.amp(&[1]);
    assert!((amp - num_complex::Complex64::new(0.0, -1.0)).norm() < 1e-10);
}

#[test]
fn exit_codes_follow_the_contract() {
    // Success.
    let ok = binary()
        .args(["kepler-verify", "--points", "10", "--seed", "7"])
        .output()
        .expect("binary runs");
    assert!(ok.status.success(), "stdout: {stdout}", stdout = String::from_utf8_lossy(&ok.stdout));

    // Check failure: unreachable tolerance.
    let fail = binary()
        .args(["kepler-verify", "--points", "10", "--seed", "7", "--tol", "1e-30"])
        .output()
        .expect("binary runs");
    assert_eq!(fail.status.code(), Some(1));

    // Bad config: malformed expression.
    let bad = binary()
        .args([
            "bracket",
            "--f",
            "q1 +",
            "--g",
            "p1",
            "--point",
            "1,0,0,1",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(2));

    // I/O failure: unwritable output path.
    let io = binary()
        .args([
            "quantize-spectrum",
            "--H",
            "I1",
            "--lambda",
            "0",
            "--box",
            "0:1",
            "--out",
            "/nonexistent-dir/spec.csv",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(io.status.code(), Some(3));
}

#[test]
fn bracket_command_evaluates_the_frozen_example() {
    let out = commands::bracket(
        "q1*p2 - q2*p1",
        "q1*(p1^2+p2^2) - p1*(p1*q1+p2*q2) - q1/(q1^2+q2^2)^0.5",
        2,
        "1,0.5,-0.3,1",
        "analytic",
        1e-6,
    )
    .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&out.artifact).unwrap();
    let v = doc["value"].as_f64().unwrap();
    assert!((v - 0.1022135954999579).abs() < 1e-13);
}

#[test]
fn orbit_csv_has_full_precision_header_and_footer() {
    let out = commands::kepler_orbit(1.0, 0.3, 1e-2, 1.0).unwrap();
    assert!(out.artifact.starts_with("t,q1,q2,p1,p2\n"));
    assert!(out.artifact.contains("# period_predicted="));
    // 17 significant digits in scientific notation.
    let second_line = out.artifact.lines().nth(1).unwrap();
    let first_field = second_line.split(',').nth(1).unwrap();
    assert!(
        first_field.contains('e') && first_field.split('e').next().unwrap().len() >= 18,
        "field {first_field} is not full precision"
    );
}
