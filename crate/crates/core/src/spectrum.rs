//! Two-channel spectrum synthesis: every dot's exciton and biexciton photon
//! rates are accumulated as delta lines into mode-channel (I_A) and
//! leaky-channel (I_B) energy bins; channels are then combined with the
//! collection efficiencies of the detection set-up.

use thiserror::Error;

use crate::cavity::CavityMode;
use crate::dynamics::{steady_state, transition_rates_with, BiexcitonCoupling};
use crate::ensemble::QuantumDot;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("bin width {bin_width} meV too coarse for the mode: must be <= {max} meV (E0/Q/10)")]
    BinTooCoarse { bin_width: f64, max: f64 },
    #[error("transition line at {energy} meV falls outside the energy grid")]
    LineOutsideGrid { energy: f64 },
    #[error("pump rate must be non-negative, got {0}")]
    NegativePump(f64),
    #[error("collection efficiencies must be non-negative and not both zero (A={a}, B={b})")]
    BadCollection { a: f64, b: f64 },
    #[error("channel has no positive values to normalize")]
    EmptyChannel,
}

/// Uniform energy grid described by its low edge, bin width and bin count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Low edge of the first bin (meV).
    pub e_min: f64,
    /// Bin width (meV).
    pub bin_width: f64,
    pub n_bins: usize,
}

impl GridSpec {
    /// Smallest grid of `bin_width` bins starting at `e_lo` that covers `e_hi`.
    pub fn covering(e_lo: f64, e_hi: f64, bin_width: f64) -> Result<Self, SpectrumError> {
        let ok = crate::finite_pos(bin_width) && e_hi > e_lo;
        if !ok {
            return Err(SpectrumError::InvalidGrid(format!(
                "need e_hi > e_lo and positive bin width, got [{e_lo}, {e_hi}] / {bin_width}"
            )));
        }
        let n_bins = ((e_hi - e_lo) / bin_width).ceil() as usize;
        Ok(GridSpec {
            e_min: e_lo,
            bin_width,
            n_bins,
        })
    }

    pub fn validate(&self) -> Result<(), SpectrumError> {
        if self.n_bins == 0 || !crate::finite_pos(self.bin_width) || !self.e_min.is_finite() {
            return Err(SpectrumError::InvalidGrid(format!("{self:?}")));
        }
        Ok(())
    }

    /// Center energy of bin `i`.
    pub fn center(&self, i: usize) -> f64 {
        self.e_min + (i as f64 + 0.5) * self.bin_width
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_bins).map(|i| self.center(i)).collect()
    }

    /// Bin holding energy `e`, or None when outside the grid.
    pub fn bin_of(&self, e: f64) -> Option<usize> {
        let idx = (e - self.e_min) / self.bin_width;
        if idx >= 0.0 && idx < self.n_bins as f64 {
            Some(idx as usize)
        } else {
            None
        }
    }

    pub fn e_max(&self) -> f64 {
        self.e_min + self.bin_width * self.n_bins as f64
    }
}

/// Collection plus detection efficiencies for mode photons (`a`) and
/// leaky-mode photons (`b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectionGeometry {
    pub a: f64,
    pub b: f64,
}

impl CollectionGeometry {
    pub fn new(a: f64, b: f64) -> Result<Self, SpectrumError> {
        let geom = CollectionGeometry { a, b };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<(), SpectrumError> {
        let ok = crate::finite_nonneg(self.a)
            && crate::finite_nonneg(self.b)
            && (self.a > 0.0 || self.b > 0.0);
        if !ok {
            return Err(SpectrumError::BadCollection {
                a: self.a,
                b: self.b,
            });
        }
        Ok(())
    }
}

/// Run descriptor carried along with the synthesized channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumMeta {
    /// Pump rate per dot (units of the bulk exciton decay rate).
    pub pump: f64,
    pub mode: CavityMode,
    /// Sum of ensemble weights.
    pub total_weight: f64,
    pub n_dots: usize,
}

/// Two-channel spectrum on a uniform energy grid, in photons per unit time
/// per bin (units of the bulk decay rate).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub grid: GridSpec,
    /// Mode-photon channel I_A.
    pub i_a: Vec<f64>,
    /// Leaky-photon channel I_B.
    pub i_b: Vec<f64>,
    pub meta: SpectrumMeta,
}

/// Accumulates every dot's steady-state photon rates into the two channels.
///
/// Each exciton line adds `weight * i_x * beta` to I_A and the leaky
/// remainder to I_B at the bin holding `e_x`; the biexciton line does the
/// same at `e_x - e_bind`. Binning partitions the lines, so the channel sums
/// conserve the total emitted photon rate exactly.
pub fn synthesize_with(
    dots: &[QuantumDot],
    mode: &CavityMode,
    p: f64,
    grid: &GridSpec,
    coupling: BiexcitonCoupling,
) -> Result<Spectrum, SpectrumError> {
    grid.validate()?;
    let max_bin = mode.fwhm() / 10.0;
    if grid.bin_width > max_bin {
        return Err(SpectrumError::BinTooCoarse {
            bin_width: grid.bin_width,
            max: max_bin,
        });
    }
    if !crate::finite_nonneg(p) {
        return Err(SpectrumError::NegativePump(p));
    }
    let mut i_a = vec![0.0; grid.n_bins];
    let mut i_b = vec![0.0; grid.n_bins];
    let mut total_weight = 0.0;
    for dot in dots {
        let rates = transition_rates_with(dot, mode, coupling);
        let ss = steady_state(p, &rates).expect("pump checked non-negative");
        let bin_x = grid
            .bin_of(dot.e_x)
            .ok_or(SpectrumError::LineOutsideGrid { energy: dot.e_x })?;
        let e_xx = dot.e_x - dot.e_bind;
        let bin_xx = grid
            .bin_of(e_xx)
            .ok_or(SpectrumError::LineOutsideGrid { energy: e_xx })?;
        i_a[bin_x] += dot.weight * ss.i_x * rates.beta_x;
        i_b[bin_x] += dot.weight * ss.i_x * (1.0 - rates.beta_x);
        i_a[bin_xx] += dot.weight * ss.i_xx * rates.beta_xx;
        i_b[bin_xx] += dot.weight * ss.i_xx * (1.0 - rates.beta_xx);
        total_weight += dot.weight;
    }
    Ok(Spectrum {
        grid: *grid,
        i_a,
        i_b,
        meta: SpectrumMeta {
            pump: p,
            mode: *mode,
            total_weight,
            n_dots: dots.len(),
        },
    })
}

/// [`synthesize_with`] at the default biexciton coupling.
pub fn synthesize(
    dots: &[QuantumDot],
    mode: &CavityMode,
    p: f64,
    grid: &GridSpec,
) -> Result<Spectrum, SpectrumError> {
    synthesize_with(dots, mode, p, grid, BiexcitonCoupling::default())
}

/// Detected spectrum A I_A + B I_B, elementwise over the grid.
pub fn combine(spec: &Spectrum, geom: &CollectionGeometry) -> Vec<f64> {
    spec.i_a
        .iter()
        .zip(&spec.i_b)
        .map(|(&a, &b)| geom.a * a + geom.b * b)
        .collect()
}

/// Scales a channel so its maximum is exactly 1.
pub fn normalize_peak(values: &[f64]) -> Result<Vec<f64>, SpectrumError> {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !crate::finite_pos(max) {
        return Err(SpectrumError::EmptyChannel);
    }
    Ok(values.iter().map(|&v| v / max).collect())
}

/// Optional Lorentzian smoothing for display purposes only. The kernel is
/// renormalized per output bin, so a flat curve stays flat at the edges.
/// All analysis runs on raw histograms; keep this out of regression paths.
pub fn convolve_lorentzian(values: &[f64], grid: &GridSpec, kernel_fwhm: f64) -> Vec<f64> {
    if kernel_fwhm <= 0.0 {
        return values.to_vec();
    }
    let half = 0.5 * kernel_fwhm;
    // Truncate the kernel at 40 half-widths; beyond that it contributes
    // less than ~1e-3 relative to the core.
    let reach = ((40.0 * half) / grid.bin_width).ceil() as isize;
    let n = values.len() as isize;
    let mut out = vec![0.0; values.len()];
    for i in 0..n {
        let mut acc = 0.0;
        let mut norm = 0.0;
        for j in (i - reach).max(0)..=(i + reach).min(n - 1) {
            let de = (i - j) as f64 * grid.bin_width;
            let k = half * half / (de * de + half * half);
            acc += k * values[j as usize];
            norm += k;
        }
        out[i as usize] = acc / norm;
    }
    out
}
