//! Experiment-facing observables: peak energy and FWHM, measured (apparent)
//! quality factor, effective Purcell factor, dip contrast, and pump-power
//! sweeps.

use thiserror::Error;

use crate::cavity::CavityMode;
use crate::dynamics::BiexcitonCoupling;
use crate::ensemble::QuantumDot;
use crate::spectrum::{combine, synthesize_with, CollectionGeometry, GridSpec};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("curve length {values} does not match grid bin count {bins}")]
    LengthMismatch { values: usize, bins: usize },
    #[error("curve maximum sits at the grid edge (bin {0})")]
    PeakAtEdge(usize),
    #[error("multiple equal global maxima (bins {0} and {1})")]
    AmbiguousPeak(usize, usize),
    #[error("half-maximum level never crossed on the {0} side")]
    HalfMaxNotBracketed(&'static str),
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("measured Q {q_measured} is not below the true Q {q_true}: no broadening to invert")]
    NoBroadening { q_true: f64, q_measured: f64 },
    #[error("reference detuning window [8, 12] linewidths falls outside the grid")]
    ReferenceOutsideGrid,
    #[error("curve is not positive over the reference window")]
    NonPositiveReference,
    #[error("pump powers must be strictly increasing and non-empty")]
    BadPowerList,
    #[error("sweep failed at pump {power}: {message}")]
    SweepFailed { power: f64, message: String },
}

/// Peak location, width and the apparent quality factor e_peak / FWHM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    pub e_peak: f64,
    pub fwhm: f64,
    pub q_measured: f64,
    pub height: f64,
}

/// Locates the global maximum, refines the peak position with a parabola
/// through the three surrounding bins, and takes the FWHM from linear
/// interpolation of the two half-maximum crossings walking out from the peak.
///
/// Adjacent equal maxima (a symmetric peak sampled astride its center) are
/// accepted; equal maxima in separated bins are ambiguous and rejected.
pub fn peak_fwhm(grid: &GridSpec, values: &[f64]) -> Result<PeakReport, AnalysisError> {
    if values.len() != grid.n_bins {
        return Err(AnalysisError::LengthMismatch {
            values: values.len(),
            bins: grid.n_bins,
        });
    }
    let mut i_max = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[i_max] {
            i_max = i;
        }
    }
    for (i, &v) in values.iter().enumerate() {
        if v == values[i_max] && i != i_max && i != i_max + 1 {
            return Err(AnalysisError::AmbiguousPeak(i_max, i));
        }
    }
    if i_max == 0 || i_max == values.len() - 1 {
        return Err(AnalysisError::PeakAtEdge(i_max));
    }
    let (ym, y0, yp) = (values[i_max - 1], values[i_max], values[i_max + 1]);
    let curvature = ym - 2.0 * y0 + yp;
    let offset = if curvature != 0.0 {
        0.5 * (ym - yp) / curvature
    } else {
        0.0
    };
    let e_peak = grid.center(i_max) + offset * grid.bin_width;
    let height = y0 - 0.25 * (ym - yp) * offset;
    let half = 0.5 * height;

    let mut left = i_max;
    while left > 0 && values[left] > half {
        left -= 1;
    }
    if values[left] > half {
        return Err(AnalysisError::HalfMaxNotBracketed("low-energy"));
    }
    let e_left = interp_crossing(grid, left, left + 1, values, half);

    let mut right = i_max;
    while right + 1 < values.len() && values[right] > half {
        right += 1;
    }
    if values[right] > half {
        return Err(AnalysisError::HalfMaxNotBracketed("high-energy"));
    }
    let e_right = interp_crossing(grid, right, right - 1, values, half);

    let fwhm = e_right - e_left;
    Ok(PeakReport {
        e_peak,
        fwhm,
        q_measured: e_peak / fwhm,
        height,
    })
}

fn interp_crossing(grid: &GridSpec, below: usize, above: usize, values: &[f64], half: f64) -> f64 {
    let (x0, y0) = (grid.center(below), values[below]);
    let (x1, y1) = (grid.center(above), values[above]);
    if y1 == y0 {
        return 0.5 * (x0 + x1);
    }
    x0 + (half - y0) * (x1 - x0) / (y1 - y0)
}

/// Inverts the low-power broadening factor sqrt((F + g)/g): returns
/// g ((Q_true / Q_measured)^2 - 1), the ensemble-averaged Purcell factor
/// implied by an apparent quality factor below the true one.
pub fn effective_purcell(
    q_true: f64,
    q_measured: f64,
    gamma_leak: f64,
) -> Result<f64, AnalysisError> {
    for (name, value) in [
        ("q_true", q_true),
        ("q_measured", q_measured),
        ("gamma_leak", gamma_leak),
    ] {
        if !crate::finite_pos(value) {
            return Err(AnalysisError::NonPositive { name, value });
        }
    }
    if q_measured >= q_true {
        return Err(AnalysisError::NoBroadening { q_true, q_measured });
    }
    let ratio = q_true / q_measured;
    Ok(gamma_leak * (ratio * ratio - 1.0))
}

/// Fractional suppression of a curve at the mode energy relative to the mean
/// over detunings of 8 to 12 mode linewidths on both sides. Positive for a
/// dip, negative for a peak.
pub fn dip_contrast(
    grid: &GridSpec,
    values: &[f64],
    mode: &CavityMode,
) -> Result<f64, AnalysisError> {
    if values.len() != grid.n_bins {
        return Err(AnalysisError::LengthMismatch {
            values: values.len(),
            bins: grid.n_bins,
        });
    }
    let center_bin = grid
        .bin_of(mode.e0)
        .ok_or(AnalysisError::ReferenceOutsideGrid)?;
    let fwhm = mode.fwhm();
    let (mut wider, mut narrower) = (false, false);
    let mut acc = 0.0;
    let mut count = 0usize;
    for (i, &v) in values.iter().enumerate() {
        let d = (grid.center(i) - mode.e0).abs() / fwhm;
        if (8.0..=12.0).contains(&d) {
            acc += v;
            count += 1;
            if grid.center(i) < mode.e0 {
                narrower = true;
            } else {
                wider = true;
            }
        }
    }
    if count == 0 || !wider || !narrower {
        return Err(AnalysisError::ReferenceOutsideGrid);
    }
    let reference = acc / count as f64;
    if !crate::finite_pos(reference) {
        return Err(AnalysisError::NonPositiveReference);
    }
    Ok((reference - values[center_bin]) / reference)
}

/// Which channel the apparent Q is extracted from in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QChannel {
    /// Mode-photon channel I_A only.
    #[default]
    ModeOnly,
    /// Detected spectrum A I_A + B I_B.
    Combined,
}

/// One pump power point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub power: f64,
    pub q_measured: f64,
    pub e_peak: f64,
    pub fwhm: f64,
    /// Contrast of the leaky channel at the mode energy.
    pub dip_contrast: f64,
}

/// Pump-power sweep over a shared ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub channel: QChannel,
}

/// Synthesizes one spectrum per pump power and extracts the apparent Q (from
/// the channel selected by `channel`) and the leaky-channel dip contrast.
/// Powers must be strictly increasing; rows come back in the same order.
#[allow(clippy::too_many_arguments)]
pub fn power_sweep(
    dots: &[QuantumDot],
    mode: &CavityMode,
    grid: &GridSpec,
    geometry: &CollectionGeometry,
    powers: &[f64],
    channel: QChannel,
    coupling: BiexcitonCoupling,
) -> Result<SweepResult, AnalysisError> {
    if powers.is_empty() || powers.windows(2).any(|w| w[1] <= w[0]) {
        return Err(AnalysisError::BadPowerList);
    }
    let mut rows = Vec::with_capacity(powers.len());
    for &power in powers {
        let failed =
            |message: String| AnalysisError::SweepFailed { power, message };
        let spec = synthesize_with(dots, mode, power, grid, coupling)
            .map_err(|e| failed(e.to_string()))?;
        let curve = match channel {
            QChannel::ModeOnly => spec.i_a.clone(),
            QChannel::Combined => combine(&spec, geometry),
        };
        let report = peak_fwhm(grid, &curve).map_err(|e| failed(e.to_string()))?;
        let contrast = dip_contrast(grid, &spec.i_b, mode).map_err(|e| failed(e.to_string()))?;
        rows.push(SweepRow {
            power,
            q_measured: report.q_measured,
            e_peak: report.e_peak,
            fwhm: report.fwhm,
            dip_contrast: contrast,
        });
    }
    Ok(SweepResult { rows, channel })
}
