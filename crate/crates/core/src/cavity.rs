//! The confined cavity mode: Lorentzian spectral density, Purcell factor,
//! transverse field profile and the broad-emitter substitution for the
//! quality factor.

use std::f64::consts::PI;

use thiserror::Error;

use crate::bessel::{j0, J0_FIRST_ZERO};

#[derive(Debug, Error, PartialEq)]
pub enum CavityError {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("gamma_leak must lie in (0, 1], got {0}")]
    LeakOutOfRange(f64),
    #[error("purcell factor must be non-negative, got {0}")]
    NegativePurcell(f64),
    #[error("radial position {r} um outside the pillar [0, {radius}] um")]
    RadiusOutOfRange { r: f64, radius: f64 },
    #[error("point-dot profile is only defined at r = 0, got {0} um")]
    PointDotOffCenter(f64),
}

/// Transverse profile of the fundamental mode, normalized to 1 on axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeProfile {
    /// J0^2 with the first zero pinned to the pillar edge.
    BesselTruncated,
    /// exp(-2 r^2 / w^2) with w = R / sqrt(2).
    Gaussian,
    /// Flat over the pillar cross-section.
    Uniform,
    /// All dots sit on the axis; analytic reference geometry.
    PointDot,
}

/// Fundamental cavity mode.
///
/// Energies in meV, lengths in um. `fp` is the on-axis, on-resonance Purcell
/// factor; it can be supplied directly or computed with [`purcell_factor`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityMode {
    /// Mode resonance energy E0 (meV).
    pub e0: f64,
    /// Quality factor.
    pub q: f64,
    /// Purcell factor on resonance at the field antinode.
    pub fp: f64,
    /// Emission rate factor into leaky modes, relative to bulk.
    pub gamma_leak: f64,
    /// Pillar radius (um).
    pub radius: f64,
    pub profile: ModeProfile,
}

impl CavityMode {
    pub fn new(
        e0: f64,
        q: f64,
        fp: f64,
        gamma_leak: f64,
        radius: f64,
        profile: ModeProfile,
    ) -> Result<Self, CavityError> {
        let mode = CavityMode {
            e0,
            q,
            fp,
            gamma_leak,
            radius,
            profile,
        };
        mode.validate()?;
        Ok(mode)
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        for (name, value) in [("e0", self.e0), ("q", self.q), ("radius", self.radius)] {
            if !crate::finite_pos(value) {
                return Err(CavityError::NonPositive { name, value });
            }
        }
        if !crate::finite_nonneg(self.fp) {
            return Err(CavityError::NegativePurcell(self.fp));
        }
        let leak_ok = crate::finite_pos(self.gamma_leak) && self.gamma_leak <= 1.0;
        if !leak_ok {
            return Err(CavityError::LeakOutOfRange(self.gamma_leak));
        }
        Ok(())
    }

    /// Mode linewidth E0/Q (meV).
    pub fn fwhm(&self) -> f64 {
        self.e0 / self.q
    }
}

/// Inputs for the Purcell formula. `v_eff` in um^3, `lambda_vac` in nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurcellInputs {
    pub q: f64,
    pub v_eff: f64,
    pub lambda_vac: f64,
    pub n_index: f64,
}

/// Purcell factor (3 / 4 pi^2) Q (lambda/n)^3 / V.
pub fn purcell_factor(inputs: &PurcellInputs) -> Result<f64, CavityError> {
    for (name, value) in [
        ("q", inputs.q),
        ("v_eff", inputs.v_eff),
        ("lambda_vac", inputs.lambda_vac),
        ("n_index", inputs.n_index),
    ] {
        if !crate::finite_pos(value) {
            return Err(CavityError::NonPositive { name, value });
        }
    }
    // lambda in nm, V in um^3.
    let lam_um = inputs.lambda_vac * 1e-3 / inputs.n_index;
    Ok(3.0 / (4.0 * PI * PI) * inputs.q * lam_um.powi(3) / inputs.v_eff)
}

/// Lorentzian spectral density of the mode, normalized to 1 on resonance:
/// E0^2 / (4 Q^2 (E - E0)^2 + E0^2).
pub fn lorentzian(e: f64, mode: &CavityMode) -> f64 {
    let de = e - mode.e0;
    let e0sq = mode.e0 * mode.e0;
    e0sq / (4.0 * mode.q * mode.q * de * de + e0sq)
}

/// Normalized local field intensity |E_xy(r)|^2 at radial position `r` (um).
pub fn field_intensity(r: f64, mode: &CavityMode) -> Result<f64, CavityError> {
    if mode.profile == ModeProfile::PointDot {
        return if r == 0.0 {
            Ok(1.0)
        } else {
            Err(CavityError::PointDotOffCenter(r))
        };
    }
    if !(0.0..=mode.radius).contains(&r) {
        return Err(CavityError::RadiusOutOfRange {
            r,
            radius: mode.radius,
        });
    }
    let rho = r / mode.radius;
    Ok(match mode.profile {
        ModeProfile::BesselTruncated => {
            let v = j0(J0_FIRST_ZERO * rho);
            v * v
        }
        ModeProfile::Gaussian => (-4.0 * rho * rho).exp(),
        ModeProfile::Uniform => 1.0,
        ModeProfile::PointDot => unreachable!(),
    })
}

/// Quality factor governing the Purcell effect when the emitter is broader
/// than the mode: the smaller of cavity and emitter Q.
pub fn effective_q_broad_emitter(q_cav: f64, q_em: f64) -> Result<f64, CavityError> {
    for (name, value) in [("q_cav", q_cav), ("q_em", q_em)] {
        if !crate::finite_pos(value) {
            return Err(CavityError::NonPositive { name, value });
        }
    }
    Ok(q_cav.min(q_em))
}
