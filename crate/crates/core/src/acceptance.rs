//! Acceptance regression suite: ten numbered criteria covering the analytic
//! linewidth law, the published calibration points, the sweep endpoints,
//! conservation laws and the collection-geometry signatures. Each criterion
//! returns a pass/fail result with the measured numbers; the CLI `check`
//! subcommand and the `acceptance` integration test both run the full list.

use crate::analysis::{dip_contrast, effective_purcell, peak_fwhm};
use crate::cavity::{purcell_factor, CavityMode, ModeProfile, PurcellInputs};
use crate::dynamics::{integrate_rate_eqs, steady_state, transition_rates, TransitionRates};
use crate::ensemble::EnsembleMode;
use crate::scenario::{GridScale, PowerGrid, Scenario};
use crate::spectrum::combine;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {:2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Runs all ten criteria in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_01_point_dot_linewidth_law(),
        criterion_02_effective_purcell_calibration(),
        criterion_03_sweep_endpoints(),
        criterion_04_high_power_convergence(),
        criterion_05_steady_state_oracle(),
        criterion_06_photon_conservation(),
        criterion_07_all_photon_flatness(),
        criterion_08_leaky_channel_dip(),
        criterion_09_mixed_collection_crossover(),
        criterion_10_purcell_round_trip(),
    ]
}

fn pillar(q: f64, fp: f64, gamma_leak: f64, profile: ModeProfile) -> Scenario {
    Scenario {
        mode: CavityMode {
            e0: 1300.0,
            q,
            fp,
            gamma_leak,
            radius: 0.5,
            profile,
        },
        ..Scenario::default()
    }
}

/// Low-power channel-A linewidth of an on-axis ensemble follows
/// (E0/Q) sqrt((Fp + g)/g) within 1%.
pub fn criterion_01_point_dot_linewidth_law() -> CriterionResult {
    const REL_TOL: f64 = 0.01;
    const CASES: [(f64, f64, f64); 3] = [
        (2300.0, 28.0, 1.0),
        (15000.0, 189.0, 1.0),
        (5000.0, 50.0, 0.8),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (q, fp, g) in CASES {
        let prepared = pillar(q, fp, g, ModeProfile::PointDot).prepare().unwrap();
        let dots = prepared.ensemble().unwrap();
        let spec = prepared.spectrum(&dots, 0.01).unwrap();
        let report = peak_fwhm(&prepared.grid, &spec.i_a).unwrap();
        let law = (1300.0 / q) * ((fp + g) / g).sqrt();
        let rel = (report.fwhm - law) / law;
        passed &= rel.abs() <= REL_TOL;
        parts.push(format!(
            "Q={q} Fp={fp} g={g}: fwhm={:.5} law={law:.5} rel={:+.3}%",
            report.fwhm,
            100.0 * rel
        ));
    }
    CriterionResult {
        id: 1,
        name: "point-dot linewidth law",
        passed,
        detail: parts.join("; "),
    }
}

/// Spatially distributed low-Q pillar at low power: apparent Q near 700 and
/// an effective Purcell factor a factor 3 to 4.5 below the on-axis value.
pub fn criterion_02_effective_purcell_calibration() -> CriterionResult {
    const FP_EFF_RANGE: (f64, f64) = (6.5, 10.8);
    const RATIO_RANGE: (f64, f64) = (3.0, 4.5);
    const Q_RANGE: (f64, f64) = (525.0, 875.0);
    let prepared = pillar(2300.0, 28.0, 1.0, ModeProfile::BesselTruncated)
        .prepare()
        .unwrap();
    let dots = prepared.ensemble().unwrap();
    let spec = prepared.spectrum(&dots, 0.01).unwrap();
    let q_meas = peak_fwhm(&prepared.grid, &spec.i_a).unwrap().q_measured;
    let fp_eff = effective_purcell(2300.0, q_meas, 1.0).unwrap();
    let ratio = 28.0 / fp_eff;
    let passed = (FP_EFF_RANGE.0..=FP_EFF_RANGE.1).contains(&fp_eff)
        && (RATIO_RANGE.0..=RATIO_RANGE.1).contains(&ratio)
        && (Q_RANGE.0..=Q_RANGE.1).contains(&q_meas);
    CriterionResult {
        id: 2,
        name: "effective Purcell calibration",
        passed,
        detail: format!(
            "q_measured={q_meas:.1} (want {Q_RANGE:?}), Fp_eff={fp_eff:.2} (want {FP_EFF_RANGE:?}), Fp/Fp_eff={ratio:.2} (want {RATIO_RANGE:?})"
        ),
    }
}

/// High-Q sweep endpoints: apparent Q rises from ~2200 at 0.01 to ~13700 at
/// 1000 pump units, non-decreasing along the way within 2% slack.
pub fn criterion_03_sweep_endpoints() -> CriterionResult {
    const LOW_RANGE: (f64, f64) = (1650.0, 2750.0);
    const HIGH_RANGE: (f64, f64) = (12330.0, 15000.0);
    const MONOTONE_SLACK: f64 = 0.98;
    let mut scenario = pillar(15000.0, 189.0, 1.0, ModeProfile::BesselTruncated);
    scenario.powers = PowerGrid::Grid {
        start: 0.01,
        stop: 1000.0,
        scale: GridScale::Log,
        count: 25,
    };
    let prepared = scenario.prepare().unwrap();
    let dots = prepared.ensemble().unwrap();
    let sweep = prepared.sweep(&dots).unwrap();
    let qs: Vec<f64> = sweep.rows.iter().map(|r| r.q_measured).collect();
    let first = qs[0];
    let last = *qs.last().unwrap();
    let monotone = qs.windows(2).all(|w| w[1] >= MONOTONE_SLACK * w[0]);
    let passed = (LOW_RANGE.0..=LOW_RANGE.1).contains(&first)
        && (HIGH_RANGE.0..=HIGH_RANGE.1).contains(&last)
        && monotone;
    CriterionResult {
        id: 3,
        name: "sweep endpoints",
        passed,
        detail: format!(
            "q(0.01)={first:.0} (want {LOW_RANGE:?}), q(1000)={last:.0} (want {HIGH_RANGE:?}), non-decreasing within 2%: {monotone}"
        ),
    }
}

/// The apparent Q saturates at the real Q: at pump 1000 it reaches at least
/// 90% of Q_true for both pillars.
pub fn criterion_04_high_power_convergence() -> CriterionResult {
    const FRACTION: f64 = 0.9;
    let mut passed = true;
    let mut parts = Vec::new();
    for (q, fp) in [(15000.0, 189.0), (2300.0, 28.0)] {
        let prepared = pillar(q, fp, 1.0, ModeProfile::BesselTruncated)
            .prepare()
            .unwrap();
        let dots = prepared.ensemble().unwrap();
        let spec = prepared.spectrum(&dots, 1000.0).unwrap();
        let q_meas = peak_fwhm(&prepared.grid, &spec.i_a).unwrap().q_measured;
        passed &= q_meas >= FRACTION * q;
        parts.push(format!(
            "Q={q}: q(1000)={q_meas:.0} (want >= {:.0})",
            FRACTION * q
        ));
    }
    CriterionResult {
        id: 4,
        name: "high-power convergence",
        passed,
        detail: parts.join("; "),
    }
}

/// Closed-form steady state against explicit time integration over 100
/// randomized (P, gamma_x, gamma_xx) triples, plus exact pump balance.
pub fn criterion_05_steady_state_oracle() -> CriterionResult {
    const REL_TOL: f64 = 1e-6;
    const BALANCE_TOL: f64 = 1e-12;
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst_rel = 0.0_f64;
    let mut worst_balance = 0.0_f64;
    for _ in 0..100 {
        let p = 10f64.powf(-2.0 + 4.0 * next());
        let gx = 0.5 + 40.0 * next();
        let gxx = 1.0 + 80.0 * next();
        let rates = TransitionRates {
            gamma_x: gx,
            gamma_xx: gxx,
            beta_x: 0.0,
            beta_xx: 0.0,
        };
        let ss = steady_state(p, &rates).unwrap();
        let balance = ((ss.i_x + ss.i_xx) - p * (ss.g + ss.x)).abs()
            / (p * (ss.g + ss.x)).max(f64::MIN_POSITIVE);
        worst_balance = worst_balance.max(balance);
        let dt = 0.02 / (p + gx + gxx);
        let t_end = 60.0 / gx.min(gxx);
        let last = *integrate_rate_eqs(p, &rates, t_end, dt)
            .unwrap()
            .last()
            .unwrap();
        let rel_x = ((p * last.g) - ss.i_x).abs() / ss.i_x;
        let rel_xx = ((p * last.x) - ss.i_xx).abs() / ss.i_xx;
        worst_rel = worst_rel.max(rel_x).max(rel_xx);
    }
    let passed = worst_rel < REL_TOL && worst_balance <= BALANCE_TOL;
    CriterionResult {
        id: 5,
        name: "steady-state oracle",
        passed,
        detail: format!(
            "worst |closed-form - integrated| rel = {worst_rel:.2e} (want < {REL_TOL:.0e}), worst pump-balance rel = {worst_balance:.2e} (want <= {BALANCE_TOL:.0e})"
        ),
    }
}

/// Binned channels conserve the total emitted photon rate to 1e-9 relative,
/// for both quadrature and Monte-Carlo ensembles.
pub fn criterion_06_photon_conservation() -> CriterionResult {
    const REL_TOL: f64 = 1e-9;
    let mut worst = 0.0_f64;
    let mut parts = Vec::new();
    let cases = [
        (
            "quadrature hi-Q",
            15000.0,
            189.0,
            EnsembleMode::Quadrature,
            1.0,
        ),
        (
            "monte-carlo lo-Q",
            2300.0,
            28.0,
            EnsembleMode::MonteCarlo,
            0.1,
        ),
    ];
    for (tag, q, fp, mode, p) in cases {
        let mut scenario = pillar(q, fp, 1.0, ModeProfile::BesselTruncated);
        scenario.ensemble.mode = mode;
        scenario.ensemble.n_dots = 50_000.0;
        scenario.ensemble.seed = 404;
        let prepared = scenario.prepare().unwrap();
        let dots = prepared.ensemble().unwrap();
        let spec = prepared.spectrum(&dots, p).unwrap();
        let binned: f64 = spec.i_a.iter().sum::<f64>() + spec.i_b.iter().sum::<f64>();
        let direct: f64 = dots
            .iter()
            .map(|d| {
                let ss = steady_state(p, &transition_rates(d, &prepared.scenario.mode)).unwrap();
                d.weight * (ss.i_x + ss.i_xx)
            })
            .sum();
        let rel = (binned - direct).abs() / direct;
        worst = worst.max(rel);
        parts.push(format!("{tag}: rel={rel:.2e}"));
    }
    CriterionResult {
        id: 6,
        name: "photon conservation",
        passed: worst < REL_TOL,
        detail: format!("{} (want < {REL_TOL:.0e})", parts.join(", ")),
    }
}

/// All-photon collection (A = B = 1) at pump 0.01: the detected spectrum
/// stays flat to 1% over the central 10 meV.
pub fn criterion_07_all_photon_flatness() -> CriterionResult {
    const MAX_RATIO: f64 = 1.01;
    const HALF_SPAN: f64 = 5.0;
    let prepared = Scenario::preset("fig4").unwrap().prepare().unwrap();
    let dots = prepared.ensemble().unwrap();
    let spec = prepared.spectrum(&dots, 0.01).unwrap();
    let detected = combine(&spec, &prepared.scenario.collection);
    let e0 = prepared.scenario.mode.e0;
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    for (i, &v) in detected.iter().enumerate() {
        if (prepared.grid.center(i) - e0).abs() <= HALF_SPAN {
            max = max.max(v);
            min = min.min(v);
        }
    }
    let ratio = max / min;
    CriterionResult {
        id: 7,
        name: "all-photon flatness",
        passed: ratio < MAX_RATIO,
        detail: format!("max/min over central 10 meV = {ratio:.5} (want < {MAX_RATIO})"),
    }
}

/// Leaky-channel dip: strong at low pump, washed out at high pump.
pub fn criterion_08_leaky_channel_dip() -> CriterionResult {
    const MIN_LOW_CONTRAST: f64 = 0.5;
    let prepared = Scenario::preset("fig3").unwrap().prepare().unwrap();
    let dots = prepared.ensemble().unwrap();
    let mode = prepared.scenario.mode;
    let low = prepared.spectrum(&dots, 0.01).unwrap();
    let high = prepared.spectrum(&dots, 1000.0).unwrap();
    let c_low = dip_contrast(&prepared.grid, &low.i_b, &mode).unwrap();
    let c_high = dip_contrast(&prepared.grid, &high.i_b, &mode).unwrap();
    let passed = c_low > MIN_LOW_CONTRAST && c_high < c_low;
    CriterionResult {
        id: 8,
        name: "leaky-channel dip",
        passed,
        detail: format!(
            "contrast(P=0.01)={c_low:.3} (want > {MIN_LOW_CONTRAST}), contrast(P=1000)={c_high:.3} (want < low-power value)"
        ),
    }
}

/// Mixed collection B = 10 A: the detected spectrum dips at the mode energy
/// at low pump and peaks there at high pump.
pub fn criterion_09_mixed_collection_crossover() -> CriterionResult {
    let prepared = Scenario::preset("fig5").unwrap().prepare().unwrap();
    let dots = prepared.ensemble().unwrap();
    let grid = prepared.grid;
    let mode = prepared.scenario.mode;
    let geom = prepared.scenario.collection;
    let center = grid.bin_of(mode.e0).unwrap();

    let low = combine(&prepared.spectrum(&dots, 0.01).unwrap(), &geom);
    // Local minimum: lowest bin within +-3 linewidths of the mode energy.
    let span = (3.0 * mode.fwhm() / grid.bin_width).ceil() as usize;
    let neighborhood = (center - span)..=(center + span);
    let local_min = neighborhood.clone().all(|i| low[i] >= low[center])
        && low[center] < low[center - span]
        && low[center] < low[center + span];

    let high = combine(&prepared.spectrum(&dots, 1000.0).unwrap(), &geom);
    let (arg_max, _) = high
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let global_max = (grid.center(arg_max) - mode.e0).abs() <= grid.bin_width;

    CriterionResult {
        id: 9,
        name: "mixed-collection crossover",
        passed: local_min && global_max,
        detail: format!(
            "P=0.01 local minimum at E0: {local_min}; P=1000 global maximum at E0: {global_max} (argmax at {:+.4} meV)",
            grid.center(arg_max) - mode.e0
        ),
    }
}

/// Inverting the Purcell formula for the mode volume at (Q=2300, Fp=28) and
/// re-evaluating at Q=15000 lands at 182.6, within 4% of the quoted 189;
/// the two pillars are not exactly linear in Q and the slack is documented,
/// not hidden.
pub fn criterion_10_purcell_round_trip() -> CriterionResult {
    const REL_TOL: f64 = 0.04;
    let lambda_vac = 953.7;
    let n_index = 3.5;
    // Invert V from the low-Q pillar.
    let probe = PurcellInputs {
        q: 2300.0,
        v_eff: 1.0,
        lambda_vac,
        n_index,
    };
    let fp_per_inverse_volume = purcell_factor(&probe).unwrap();
    let v_eff = fp_per_inverse_volume / 28.0;
    let fp_hi = purcell_factor(&PurcellInputs {
        q: 15000.0,
        v_eff,
        lambda_vac,
        n_index,
    })
    .unwrap();
    let expected = 28.0 * 15000.0 / 2300.0;
    let rel_vs_quoted = (fp_hi - 189.0).abs() / 189.0;
    let passed = (fp_hi - expected).abs() < 1e-9 && rel_vs_quoted <= REL_TOL;
    CriterionResult {
        id: 10,
        name: "purcell round trip",
        passed,
        detail: format!(
            "V={v_eff:.4} um^3, Fp(Q=15000)={fp_hi:.1} vs quoted 189 (rel {:.2}%, want <= {:.0}%)",
            100.0 * rel_vs_quoted,
            100.0 * REL_TOL
        ),
    }
}
