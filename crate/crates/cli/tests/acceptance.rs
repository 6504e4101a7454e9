//! Acceptance gate: every criterion bundle must pass at its stated
//! tolerance. One line is printed per criterion; run with `--nocapture` to
//! see them all.

use actionangle_cli::acceptance;

fn check(report: actionangle_cli::CriterionReport) {
    println!("{}", report.summary_line());
    for c in &report.checks {
        println!(
            "    {} {}: {:.6e} (threshold {:.1e})",
            if c.pass { "ok  " } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
    assert!(report.pass, "{}", report.summary_line());
}

const SEED: u64 = 7;

#[test]
fn criterion_1_kepler_algebra() {
    check(acceptance::kepler_algebra_suite(SEED));
}

#[test]
fn criterion_2_superintegrable_structure() {
    check(acceptance::structure_suite(SEED));
}

#[test]
fn criterion_3_dynamics() {
    check(acceptance::dynamics_suite(SEED));
}

#[test]
fn criterion_4_chart() {
    check(acceptance::chart_suite(SEED));
}

#[test]
fn criterion_5_quantization() {
    check(acceptance::quantization_suite(SEED));
}

#[test]
fn criterion_6_holonomy() {
    check(acceptance::holonomy_suite(SEED));
}

#[test]
fn criterion_7_jacobi_and_gradient_hygiene() {
    check(acceptance::hygiene_suite(SEED));
}
