//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured evidence.  Criterion 11 (byte-identical CLI reruns)
//! lives in the CLI crate's own acceptance test target.

use charvar::verify::*;
use std::time::Instant;

fn report(criterion: &str, budget: Option<f64>, results: &[CheckResult], started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    let ok = results.iter().all(|r| r.passed);
    let details = results
        .iter()
        .map(|r| format!("{}: {}", r.name, r.details))
        .collect::<Vec<_>>()
        .join("; ");
    println!(
        "[{}] {} — {} ({:.2} s)",
        if ok { "PASS" } else { "FAIL" },
        criterion,
        details,
        elapsed
    );
    for r in results {
        assert!(r.passed, "{} failed: {}", r.name, r.details);
    }
    if let Some(limit) = budget {
        assert!(
            elapsed < limit,
            "{} exceeded its {}s budget ({:.2} s)",
            criterion,
            limit,
            elapsed
        );
    }
}

#[test]
fn acceptance_01_kappa_invariance() {
    let t = Instant::now();
    let r = check_kappa_invariance(1000, 0xA1);
    report("criterion 1 (kappa invariance)", Some(10.0), &[r], t);
}

#[test]
fn acceptance_02_relations_and_homology() {
    let t = Instant::now();
    let a = check_relation_suite(100, 0xA2);
    let b = check_homology_multiplicativity(500, 0xA2);
    report("criterion 2 (relation suite)", None, &[a, b], t);
}

#[test]
fn acceptance_03_trace_oracle() {
    let t = Instant::now();
    let a = check_trace_oracle(500, 20, 0xA3);
    let b = check_commutator_polynomial();
    report("criterion 3 (trace oracle)", None, &[a, b], t);
}

#[test]
fn acceptance_04_factorization_and_form() {
    let t = Instant::now();
    let a = check_factorization(200, 0xA4);
    let b = check_bilinear_and_projection(1000, 0xA4);
    report("criterion 4 (factorization and det identity)", None, &[a, b], t);
}

#[test]
fn acceptance_05_reduction() {
    let t = Instant::now();
    let a = check_main_lemma(1000, 0xA5);
    let b = check_y_interval(1000, 0xA5);
    let c = check_reduction_bound(1000, 0xA5);
    report("criterion 5 (reduction lemmas and bound)", Some(30.0), &[a, b, c], t);
}

#[test]
fn acceptance_06_omega_disjointness() {
    let t = Instant::now();
    let r = check_omega_disjointness(200, 0xA6);
    report("criterion 6 (omega disjointness)", None, &[r], t);
}

#[test]
fn acceptance_07_hyperbolic_verifiers() {
    let t = Instant::now();
    let a = check_closed_forms(1000, 0xA7);
    let b = check_crossing_equivalence(1000, 0xA7);
    let c = check_embedded_quadrilaterals(500, 0xA7);
    let d = check_pants_hexagons(100, 0xA7);
    report("criterion 7 (hyperbolic formulas)", None, &[a, b, c, d], t);
}

#[test]
fn acceptance_08_dehn_rotation() {
    let t = Instant::now();
    let r = check_dehn_rotation(0xA8);
    report("criterion 8 (Dehn twist rotation)", None, &[r], t);
}

#[test]
fn acceptance_09_measure_checks() {
    let t = Instant::now();
    let a = check_compact_mass(1_000_000, 0xA9);
    let b = check_slab_disintegration(100_000, 0xA9);
    let c = check_reducible_pushforward(20_000, 0xA9);
    report("criterion 9 (measure checks)", Some(300.0), &[a, b, c], t);
}

#[test]
fn acceptance_10_ergodicity_corroboration() {
    let t = Instant::now();
    let r = check_ergodicity_corroboration(1_000_000, 0xAA);
    report(
        "criterion 10 (ergodicity corroboration, statistical)",
        None,
        &[r],
        t,
    );
}
