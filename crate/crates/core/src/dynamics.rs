//! Per-dot photophysics: Purcell-enhanced exciton and biexciton decay rates,
//! mode-coupling fractions, steady-state photon rates under a CW pump, and a
//! fixed-step time integrator that serves as the independent oracle for the
//! closed-form steady state.
//!
//! All rates and pump powers are in units of the bulk exciton decay rate, so
//! an isolated dot far from resonance has gamma_x = gamma_leak and
//! gamma_xx = 2 gamma_leak.

use thiserror::Error;

use crate::cavity::{lorentzian, CavityMode};
use crate::ensemble::QuantumDot;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("pump rate must be non-negative, got {0}")]
    NegativePump(f64),
    #[error("integration step and horizon must be positive, got dt={dt}, t_end={t_end}")]
    BadTimeStep { dt: f64, t_end: f64 },
    #[error("integration unstable at t={t}: occupancy {value} left [0, 1]")]
    Unstable { t: f64, value: f64 },
}

/// Which energy the biexciton Purcell enhancement is evaluated at.
///
/// The biexciton line is red-shifted by the binding energy, so enhancing at
/// its actual emission energy is the default; the exciton-energy variant is
/// kept for sensitivity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BiexcitonCoupling {
    #[default]
    BiexcitonEnergy,
    ExcitonEnergy,
}

/// Total decay rates and mode-coupling fractions of one dot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRates {
    /// Exciton total decay rate (units of the bulk rate).
    pub gamma_x: f64,
    /// Biexciton total decay rate; twice the bulk exciton rate far off mode.
    pub gamma_xx: f64,
    /// Fraction of exciton emission funneled into the mode.
    pub beta_x: f64,
    /// Same for the biexciton transition.
    pub beta_xx: f64,
}

/// Rates for one dot: gamma = Fp L(E) u + gamma_leak per transition, with the
/// biexciton carrying twice the bulk rate.
pub fn transition_rates_with(
    dot: &QuantumDot,
    mode: &CavityMode,
    coupling: BiexcitonCoupling,
) -> TransitionRates {
    let cavity_x = mode.fp * lorentzian(dot.e_x, mode) * dot.u;
    let e_eval = match coupling {
        BiexcitonCoupling::BiexcitonEnergy => dot.e_x - dot.e_bind,
        BiexcitonCoupling::ExcitonEnergy => dot.e_x,
    };
    let cavity_xx = mode.fp * lorentzian(e_eval, mode) * dot.u;
    let g = mode.gamma_leak;
    TransitionRates {
        gamma_x: cavity_x + g,
        gamma_xx: 2.0 * (cavity_xx + g),
        beta_x: cavity_x / (cavity_x + g),
        beta_xx: cavity_xx / (cavity_xx + g),
    }
}

/// [`transition_rates_with`] at the default biexciton emission energy.
pub fn transition_rates(dot: &QuantumDot, mode: &CavityMode) -> TransitionRates {
    transition_rates_with(dot, mode, BiexcitonCoupling::default())
}

/// Steady state of the ground/exciton/biexciton ladder under pump `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    /// Probability of the empty dot.
    pub g: f64,
    /// Single-exciton occupancy.
    pub x: f64,
    /// Biexciton occupancy.
    pub x2: f64,
    /// Exciton photons per unit time.
    pub i_x: f64,
    /// Biexciton photons per unit time.
    pub i_xx: f64,
}

/// Closed-form steady state of the pump ladder: detailed balance
/// g P = gamma_x X and X P = gamma_xx X2 with g + X + X2 = 1.
pub fn steady_state(p: f64, rates: &TransitionRates) -> Result<SteadyState, DynamicsError> {
    if !crate::finite_nonneg(p) {
        return Err(DynamicsError::NegativePump(p));
    }
    let gx = rates.gamma_x;
    let gxx = rates.gamma_xx;
    let denom = 1.0 + p / gx + p * p / (gx * gxx);
    let g = 1.0 / denom;
    let x = g * p / gx;
    let x2 = x * p / gxx;
    Ok(SteadyState {
        g,
        x,
        x2,
        i_x: p * g,
        i_xx: p * x,
    })
}

/// One recorded integration step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancySample {
    pub t: f64,
    pub g: f64,
    pub x: f64,
    pub x2: f64,
}

fn derivative(p: f64, gx: f64, gxx: f64, s: [f64; 3]) -> [f64; 3] {
    let [g, x, x2] = s;
    [
        gx * x - p * g,
        gxx * x2 - p * x - gx * x + p * g,
        -gxx * x2 + p * x,
    ]
}

/// Integrates the rate equations from an empty dot with a fixed-step
/// fourth-order Runge-Kutta scheme, recording every step.
///
/// Serves as the independent oracle for [`steady_state`]; pick
/// `t_end` well past 1/min(gamma_x, gamma_xx) so transients die out.
pub fn integrate_rate_eqs(
    p: f64,
    rates: &TransitionRates,
    t_end: f64,
    dt: f64,
) -> Result<Vec<OccupancySample>, DynamicsError> {
    if !crate::finite_nonneg(p) {
        return Err(DynamicsError::NegativePump(p));
    }
    if !crate::finite_pos(dt) || !crate::finite_pos(t_end) {
        return Err(DynamicsError::BadTimeStep { dt, t_end });
    }
    let gx = rates.gamma_x;
    let gxx = rates.gamma_xx;
    let n_steps = (t_end / dt).ceil() as usize;
    let mut s = [1.0, 0.0, 0.0];
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(OccupancySample {
        t: 0.0,
        g: 1.0,
        x: 0.0,
        x2: 0.0,
    });
    for i in 0..n_steps {
        let k1 = derivative(p, gx, gxx, s);
        let mid1 = [
            s[0] + 0.5 * dt * k1[0],
            s[1] + 0.5 * dt * k1[1],
            s[2] + 0.5 * dt * k1[2],
        ];
        let k2 = derivative(p, gx, gxx, mid1);
        let mid2 = [
            s[0] + 0.5 * dt * k2[0],
            s[1] + 0.5 * dt * k2[1],
            s[2] + 0.5 * dt * k2[2],
        ];
        let k3 = derivative(p, gx, gxx, mid2);
        let end = [s[0] + dt * k3[0], s[1] + dt * k3[1], s[2] + dt * k3[2]];
        let k4 = derivative(p, gx, gxx, end);
        for j in 0..3 {
            s[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t = (i + 1) as f64 * dt;
        for &v in &s {
            if !(-1e-6..=1.0 + 1e-6).contains(&v) || !v.is_finite() {
                return Err(DynamicsError::Unstable { t, value: v });
            }
        }
        out.push(OccupancySample {
            t,
            g: s[0],
            x: s[1],
            x2: s[2],
        });
    }
    Ok(out)
}
