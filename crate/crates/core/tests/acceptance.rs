//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line (run with `--nocapture` to see them all, or use the CLI `check`
//! subcommand for the same report).

use pillarpl::acceptance::{self, CriterionResult};

fn check(result: CriterionResult) {
    println!("{}", result.summary_line());
    assert!(
        result.passed,
        "criterion {} ({}) failed: {}",
        result.id, result.name, result.detail
    );
}

#[test]
fn criterion_01_point_dot_linewidth_law() {
    check(acceptance::criterion_01_point_dot_linewidth_law());
}

#[test]
fn criterion_02_effective_purcell_calibration() {
    check(acceptance::criterion_02_effective_purcell_calibration());
}

#[test]
fn criterion_03_sweep_endpoints() {
    check(acceptance::criterion_03_sweep_endpoints());
}

#[test]
fn criterion_04_high_power_convergence() {
    check(acceptance::criterion_04_high_power_convergence());
}

#[test]
fn criterion_05_steady_state_oracle() {
    check(acceptance::criterion_05_steady_state_oracle());
}

#[test]
fn criterion_06_photon_conservation() {
    check(acceptance::criterion_06_photon_conservation());
}

#[test]
fn criterion_07_all_photon_flatness() {
    check(acceptance::criterion_07_all_photon_flatness());
}

#[test]
fn criterion_08_leaky_channel_dip() {
    check(acceptance::criterion_08_leaky_channel_dip());
}

#[test]
fn criterion_09_mixed_collection_crossover() {
    check(acceptance::criterion_09_mixed_collection_crossover());
}

#[test]
fn criterion_10_purcell_round_trip() {
    check(acceptance::criterion_10_purcell_round_trip());
}
