//! Property tests for the conservation laws and algebraic identities the
//! pipeline relies on.

use proptest::prelude::*;

use pillarpl::analysis::effective_purcell;
use pillarpl::cavity::{
    field_intensity, lorentzian, purcell_factor, CavityMode, ModeProfile, PurcellInputs,
};
use pillarpl::dynamics::{steady_state, transition_rates, TransitionRates};
use pillarpl::ensemble::QuantumDot;
use pillarpl::spectrum::{combine, normalize_peak, synthesize, CollectionGeometry, GridSpec};

fn mode(q: f64, fp: f64, profile: ModeProfile) -> CavityMode {
    CavityMode {
        e0: 1300.0,
        q,
        fp,
        gamma_leak: 1.0,
        radius: 0.5,
        profile,
    }
}

fn arb_dot() -> impl Strategy<Value = QuantumDot> {
    (1292.0..1308.0f64, 2.0..4.0f64, 0.0..=1.0f64, 0.01..10.0f64).prop_map(
        |(e_x, e_bind, u, weight)| QuantumDot {
            e_x,
            e_bind,
            u,
            weight,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn purcell_scales_linearly(q in 100.0..50_000.0f64, v in 0.01..10.0f64, c in 1.5..8.0f64) {
        let base = PurcellInputs { q, v_eff: v, lambda_vac: 953.7, n_index: 3.5 };
        let f = purcell_factor(&base).unwrap();
        let fq = purcell_factor(&PurcellInputs { q: c * q, ..base }).unwrap();
        let fv = purcell_factor(&PurcellInputs { v_eff: c * v, ..base }).unwrap();
        prop_assert!((fq - c * f).abs() <= 1e-12 * fq.abs());
        prop_assert!((fv - f / c).abs() <= 1e-12 * f.abs());
    }

    #[test]
    fn lorentzian_is_symmetric_and_bounded(q in 500.0..30_000.0f64, d in 1e-6..50.0f64) {
        let m = mode(q, 1.0, ModeProfile::Uniform);
        let hi = lorentzian(m.e0 + d, &m);
        let lo = lorentzian(m.e0 - d, &m);
        prop_assert_eq!(hi, lo);
        prop_assert!(hi > 0.0 && hi < 1.0);
        prop_assert_eq!(lorentzian(m.e0, &m), 1.0);
    }

    #[test]
    fn field_profiles_monotone(profile in prop_oneof![
        Just(ModeProfile::BesselTruncated),
        Just(ModeProfile::Gaussian),
        Just(ModeProfile::Uniform),
    ], a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let m = mode(2300.0, 28.0, profile);
        let (near, far) = if a <= b { (a, b) } else { (b, a) };
        let u_near = field_intensity(near * m.radius, &m).unwrap();
        let u_far = field_intensity(far * m.radius, &m).unwrap();
        prop_assert!(u_near >= u_far);
        prop_assert!((0.0..=1.0).contains(&u_near));
    }

    #[test]
    fn steady_state_pump_balance(p in 0.0..2000.0f64, gx in 0.1..300.0f64, gxx in 0.2..600.0f64) {
        let rates = TransitionRates { gamma_x: gx, gamma_xx: gxx, beta_x: 0.0, beta_xx: 0.0 };
        let ss = steady_state(p, &rates).unwrap();
        // Occupancies form a distribution.
        prop_assert!((ss.g + ss.x + ss.x2 - 1.0).abs() < 1e-12);
        prop_assert!(ss.g >= 0.0 && ss.x >= 0.0 && ss.x2 >= 0.0);
        // Every absorbed pump photon comes back out of the x or xx line.
        let emitted = ss.i_x + ss.i_xx;
        let pumped = p * (ss.g + ss.x);
        prop_assert!((emitted - pumped).abs() <= 1e-12 * pumped.max(1e-300));
    }

    #[test]
    fn beta_decreases_with_detuning(u in 0.05..=1.0f64, d1 in 0.0..5.0f64, d2 in 0.0..5.0f64) {
        let m = mode(15000.0, 189.0, ModeProfile::Uniform);
        let (near, far) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let b_near = transition_rates(
            &QuantumDot { e_x: m.e0 + near, e_bind: 3.0, u, weight: 1.0 }, &m).beta_x;
        let b_far = transition_rates(
            &QuantumDot { e_x: m.e0 + far, e_bind: 3.0, u, weight: 1.0 }, &m).beta_x;
        prop_assert!(b_near >= b_far);
    }

    #[test]
    fn synthesis_conserves_photons(dots in prop::collection::vec(arb_dot(), 1..60),
                                   p in 0.0..500.0f64) {
        let m = mode(2300.0, 28.0, ModeProfile::Uniform);
        let grid = GridSpec::covering(1280.0, 1312.0, m.fwhm() / 20.0).unwrap();
        let spec = synthesize(&dots, &m, p, &grid).unwrap();
        let binned: f64 = spec.i_a.iter().sum::<f64>() + spec.i_b.iter().sum::<f64>();
        let direct: f64 = dots.iter().map(|d| {
            let ss = steady_state(p, &transition_rates(d, &m)).unwrap();
            d.weight * (ss.i_x + ss.i_xx)
        }).sum();
        prop_assert!((binned - direct).abs() <= 1e-9 * direct.max(f64::MIN_POSITIVE));
        prop_assert!(spec.i_a.iter().chain(&spec.i_b).all(|&v| v >= 0.0));
    }

    #[test]
    fn combine_is_homogeneous(dots in prop::collection::vec(arb_dot(), 1..20),
                              a in 0.0..1.0f64, b in 0.01..1.0f64, c in 0.1..10.0f64) {
        let m = mode(2300.0, 28.0, ModeProfile::Uniform);
        let grid = GridSpec::covering(1280.0, 1312.0, m.fwhm() / 20.0).unwrap();
        let spec = synthesize(&dots, &m, 0.3, &grid).unwrap();
        let base = combine(&spec, &CollectionGeometry { a, b });
        let scaled = combine(&spec, &CollectionGeometry { a: c * a, b: c * b });
        for (s, r) in scaled.iter().zip(&base) {
            prop_assert!((s - c * r).abs() <= 1e-12 * s.abs().max(1e-300));
        }
    }

    #[test]
    fn normalization_is_scale_invariant(values in prop::collection::vec(0.0..1e6f64, 2..200),
                                        c in 0.001..1000.0f64) {
        prop_assume!(values.iter().any(|&v| v > 0.0));
        let n1 = normalize_peak(&values).unwrap();
        let scaled: Vec<f64> = values.iter().map(|&v| c * v).collect();
        let n2 = normalize_peak(&scaled).unwrap();
        let max = n1.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(max, 1.0);
        for (x, y) in n1.iter().zip(&n2) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn effective_purcell_round_trips(f in 0.01..500.0f64, g in 0.1..=1.0f64,
                                     q_true in 500.0..30_000.0f64) {
        let q_meas = q_true / ((f + g) / g).sqrt();
        let back = effective_purcell(q_true, q_meas, g).unwrap();
        prop_assert!((back - f).abs() <= 1e-9 * f.max(1.0));
    }
}
