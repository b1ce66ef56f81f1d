//! Acceptance suite: one test per criterion, each printing its
//! pass/fail line (visible with `--nocapture`). The slow 4-cube case of
//! criterion 7 is included when POISSON_RD_SLOW is set.

use poisson_rd::acceptance::{self, format_report_line, CriterionReport};

fn check(report: CriterionReport) {
    println!("{}", format_report_line(&report));
    assert!(
        report.passed,
        "criterion {} failed: {}",
        report.id, report.details
    );
}

#[test]
fn criterion_01_covering_count_converse() {
    check(acceptance::criterion_1());
}

#[test]
fn criterion_02_blahut_arimoto_rate() {
    check(acceptance::criterion_2());
}

#[test]
fn criterion_03_distortion_set_volumes() {
    check(acceptance::criterion_3(1));
}

#[test]
fn criterion_04_case_study_grid_and_area() {
    check(acceptance::criterion_4());
}

#[test]
fn criterion_05_feasibility_equivalence() {
    check(acceptance::criterion_5());
}

#[test]
fn criterion_06_group_structure() {
    check(acceptance::criterion_6());
}

#[test]
fn criterion_07_sym_equals_aut() {
    let slow = std::env::var("POISSON_RD_SLOW").is_ok();
    check(acceptance::criterion_7(slow));
}

#[test]
fn criterion_08_hamming_l2() {
    check(acceptance::criterion_8());
}

#[test]
fn criterion_09_symmetrization() {
    check(acceptance::criterion_9());
}

#[test]
fn criterion_10_covering_overhead() {
    check(acceptance::criterion_10());
}

#[test]
fn criterion_11_affine_extensions() {
    check(acceptance::criterion_11());
}
