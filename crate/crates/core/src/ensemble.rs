//! Quantum-dot ensemble generation: spectral positions, biexciton binding
//! energies and spatial locations, as a seeded Monte-Carlo sample or as a
//! deterministic quadrature grid, plus the smoothness diagnostic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::cavity::{field_intensity, CavityMode, ModeProfile};
use crate::quadrature::{gauss_hermite, gauss_legendre};

/// FWHM-to-sigma conversion for a Gaussian, 2 sqrt(2 ln 2).
pub const GAUSSIAN_FWHM_TO_SIGMA: f64 = 2.354_820_045_030_949;

#[derive(Debug, Error, PartialEq)]
pub enum EnsembleError {
    #[error("invalid ensemble config: {field}: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },
    #[error("ensemble is empty")]
    Empty,
    #[error("bin width must be strictly positive, got {0}")]
    BadBinWidth(f64),
}

fn config_err(field: &'static str, message: impl Into<String>) -> EnsembleError {
    EnsembleError::InvalidConfig {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleMode {
    MonteCarlo,
    Quadrature,
}

/// Configuration of the dot population.
///
/// `n_dots` is the total dot count: the number of draws in Monte-Carlo mode
/// and the normalization of the quadrature weights. Exciton energies are
/// uniform over `[E0 - window/2, E0 + window/2]`; binding energies are
/// Gaussian. In quadrature mode `energy_order` of 0 lets the caller (the
/// scenario layer) align one energy node per spectrum bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    pub mode: EnsembleMode,
    pub n_dots: f64,
    pub radial_order: usize,
    pub energy_order: usize,
    pub binding_order: usize,
    /// Full width of the exciton energy window (meV).
    pub window: f64,
    /// Mean biexciton binding energy (meV).
    pub binding_mean: f64,
    /// FWHM of the binding energy distribution (meV).
    pub binding_fwhm: f64,
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            mode: EnsembleMode::Quadrature,
            n_dots: 1e4,
            radial_order: 64,
            energy_order: 0,
            binding_order: 8,
            window: 20.0,
            binding_mean: 3.0,
            binding_fwhm: 0.6,
            seed: 1,
        }
    }
}

impl EnsembleConfig {
    /// Validates the config against a mode; the window must dwarf the mode
    /// linewidth (W >= 20 E0/Q) for the ensemble to look spectrally smooth.
    pub fn validate(&self, mode: &CavityMode) -> Result<(), EnsembleError> {
        if !crate::finite_pos(self.window) {
            return Err(config_err(
                "window",
                format!("must be positive, got {}", self.window),
            ));
        }
        let min_window = 20.0 * mode.fwhm();
        if self.window < min_window {
            return Err(config_err(
                "window",
                format!(
                    "{} meV is narrower than 20 mode linewidths ({min_window} meV)",
                    self.window
                ),
            ));
        }
        if !(self.n_dots.is_finite() && self.n_dots >= 1.0) {
            return Err(config_err(
                "n_dots",
                format!("must be >= 1, got {}", self.n_dots),
            ));
        }
        if !crate::finite_nonneg(self.binding_fwhm) {
            return Err(config_err(
                "binding_fwhm",
                format!("must be non-negative, got {}", self.binding_fwhm),
            ));
        }
        if !crate::finite_nonneg(self.binding_mean) {
            return Err(config_err(
                "binding_mean",
                format!("must be non-negative, got {}", self.binding_mean),
            ));
        }
        if self.mode == EnsembleMode::Quadrature {
            for (field, order) in [
                ("radial_order", self.radial_order),
                ("binding_order", self.binding_order),
            ] {
                if order < 1 {
                    return Err(config_err(field, "must be >= 1"));
                }
            }
            if self.energy_order < 1 {
                return Err(config_err(
                    "energy_order",
                    "must be >= 1 (0 only before resolution)",
                ));
            }
        }
        Ok(())
    }

    pub fn binding_sigma(&self) -> f64 {
        self.binding_fwhm / GAUSSIAN_FWHM_TO_SIGMA
    }

    /// Low edge of the exciton window for a given mode.
    pub fn window_lo(&self, mode: &CavityMode) -> f64 {
        mode.e0 - 0.5 * self.window
    }
}

/// One quantum dot (or one quadrature node standing in for many).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumDot {
    /// Exciton transition energy (meV). The biexciton emits at e_x - e_bind.
    pub e_x: f64,
    /// Biexciton binding energy (meV).
    pub e_bind: f64,
    /// Normalized local field intensity |E_xy(r)|^2 at the dot.
    pub u: f64,
    /// Statistical weight (photon-count multiplier).
    pub weight: f64,
}

/// Draws a seeded Monte-Carlo ensemble: positions uniform by area over the
/// pillar cross-section, exciton energies uniform over the window, binding
/// energies Gaussian. The same seed reproduces the same list bit for bit.
pub fn sample_ensemble(
    cfg: &EnsembleConfig,
    mode: &CavityMode,
) -> Result<Vec<QuantumDot>, EnsembleError> {
    if cfg.mode != EnsembleMode::MonteCarlo {
        return Err(config_err(
            "mode",
            "sample_ensemble requires MonteCarlo mode",
        ));
    }
    cfg.validate(mode)?;

    let n = cfg.n_dots.round() as usize;
    let lo = cfg.window_lo(mode);
    let normal = Normal::new(cfg.binding_mean, cfg.binding_sigma())
        .map_err(|e| config_err("binding_fwhm", e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut dots = Vec::with_capacity(n);
    for _ in 0..n {
        // Uniform density by area: p(r) ~ r, so r = R sqrt(U).
        let r = if mode.profile == ModeProfile::PointDot {
            0.0
        } else {
            mode.radius * rng.gen::<f64>().sqrt()
        };
        let u = field_intensity(r, mode).expect("r is inside the pillar by construction");
        let e_x = lo + rng.gen::<f64>() * cfg.window;
        let e_bind = normal.sample(&mut rng);
        dots.push(QuantumDot {
            e_x,
            e_bind,
            u,
            weight: 1.0,
        });
    }
    Ok(dots)
}

/// Builds the deterministic tensor-product quadrature ensemble: radial
/// Gauss-Legendre nodes weighted by the area measure, exciton-energy nodes
/// on a uniform midpoint grid over the window, binding-energy Gauss-Hermite
/// nodes over the Gaussian. Weights sum to `n_dots`.
pub fn quadrature_ensemble(
    cfg: &EnsembleConfig,
    mode: &CavityMode,
) -> Result<Vec<QuantumDot>, EnsembleError> {
    if cfg.mode != EnsembleMode::Quadrature {
        return Err(config_err(
            "mode",
            "quadrature_ensemble requires Quadrature mode",
        ));
    }
    cfg.validate(mode)?;

    // Radial nodes with weights r dr on [0, R], normalized to the area.
    let (radii, radial_w): (Vec<f64>, Vec<f64>) = if mode.profile == ModeProfile::PointDot {
        (vec![0.0], vec![1.0])
    } else {
        let (x, w) = gauss_legendre(cfg.radial_order);
        let r: Vec<f64> = x.iter().map(|&xi| 0.5 * mode.radius * (xi + 1.0)).collect();
        // 2 r / R^2 density times the Jacobian R/2 of the [-1,1] map.
        let wr = r
            .iter()
            .zip(&w)
            .map(|(&ri, &wi)| wi * ri / mode.radius)
            .collect();
        (r, wr)
    };
    let field: Vec<f64> = radii
        .iter()
        .map(|&r| field_intensity(r, mode).expect("node is inside the pillar by construction"))
        .collect();

    let (bindings, binding_w): (Vec<f64>, Vec<f64>) = if cfg.binding_fwhm == 0.0 {
        (vec![cfg.binding_mean], vec![1.0])
    } else {
        let (x, w) = gauss_hermite(cfg.binding_order);
        let sigma = cfg.binding_sigma();
        let nodes = x
            .iter()
            .map(|&xi| cfg.binding_mean + std::f64::consts::SQRT_2 * sigma * xi)
            .collect();
        let total: f64 = w.iter().sum();
        (nodes, w.iter().map(|&wi| wi / total).collect())
    };

    let n_e = cfg.energy_order;
    let lo = cfg.window_lo(mode);
    let de = cfg.window / n_e as f64;
    let we = 1.0 / n_e as f64;

    let mut dots = Vec::with_capacity(n_e * bindings.len() * radii.len());
    for j in 0..n_e {
        let e_x = lo + (j as f64 + 0.5) * de;
        for (&e_bind, &wb) in bindings.iter().zip(&binding_w) {
            for (&u, &wr) in field.iter().zip(&radial_w) {
                dots.push(QuantumDot {
                    e_x,
                    e_bind,
                    u,
                    weight: cfg.n_dots * we * wb * wr,
                });
            }
        }
    }
    Ok(dots)
}

/// Dispatches on `cfg.mode`.
pub fn generate(cfg: &EnsembleConfig, mode: &CavityMode) -> Result<Vec<QuantumDot>, EnsembleError> {
    match cfg.mode {
        EnsembleMode::MonteCarlo => sample_ensemble(cfg, mode),
        EnsembleMode::Quadrature => quadrature_ensemble(cfg, mode),
    }
}

/// Smoothness diagnostic over the mode neighborhood.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessReport {
    /// Mean number of exciton lines per bin over +-3 mode linewidths.
    pub mean_lines_per_bin: f64,
    /// Minimum over those bins.
    pub min_lines_per_bin: usize,
    pub n_bins: usize,
    /// Set when any bin holds fewer than 10 lines.
    pub warn: bool,
}

/// Counts exciton lines per spectral bin across the +-3 linewidth
/// neighborhood of the mode and flags sparse coverage.
pub fn smoothness_check(
    dots: &[QuantumDot],
    mode: &CavityMode,
    bin_width: f64,
) -> Result<SmoothnessReport, EnsembleError> {
    if dots.is_empty() {
        return Err(EnsembleError::Empty);
    }
    if !crate::finite_pos(bin_width) {
        return Err(EnsembleError::BadBinWidth(bin_width));
    }
    let half_span = 3.0 * mode.fwhm();
    let lo = mode.e0 - half_span;
    let n_bins = ((2.0 * half_span) / bin_width).ceil() as usize;
    let n_bins = n_bins.max(1);
    let mut counts = vec![0usize; n_bins];
    for dot in dots {
        let idx = (dot.e_x - lo) / bin_width;
        if idx >= 0.0 && (idx as usize) < n_bins {
            counts[idx as usize] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    let min = *counts.iter().min().expect("n_bins >= 1");
    Ok(SmoothnessReport {
        mean_lines_per_bin: total as f64 / n_bins as f64,
        min_lines_per_bin: min,
        n_bins,
        warn: min < 10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hi_q_mode(profile: ModeProfile) -> CavityMode {
        CavityMode::new(1300.0, 15000.0, 189.0, 1.0, 0.5, profile).unwrap()
    }

    fn mc_cfg(n: f64, seed: u64) -> EnsembleConfig {
        EnsembleConfig {
            mode: EnsembleMode::MonteCarlo,
            n_dots: n,
            seed,
            ..Default::default()
        }
    }

    // Test-side series for J0, independent of the crate implementation.
    fn j0_series(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=30u32 {
            term *= -(0.25 * x * x) / ((k * k) as f64);
            sum += term;
        }
        sum
    }

    /// Area average of J0^2(z0 r / R) over the disk by Simpson's rule:
    /// (2/R^2) Int_0^R J0^2 r dr, independent oracle for the sampled mean.
    fn bessel_area_average() -> f64 {
        let z0 = 2.404825557695773;
        let n = 4000;
        let h = 1.0 / n as f64;
        let f = |rho: f64| {
            let v = j0_series(z0 * rho);
            2.0 * v * v * rho
        };
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn degenerate_binding_distribution() {
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        let cfg = EnsembleConfig {
            binding_fwhm: 0.0,
            ..mc_cfg(2000.0, 3)
        };
        let dots = sample_ensemble(&cfg, &mode).unwrap();
        assert!(dots.iter().all(|d| d.e_bind == 3.0));

        let qcfg = EnsembleConfig {
            binding_fwhm: 0.0,
            binding_order: 1,
            energy_order: 16,
            ..EnsembleConfig::default()
        };
        let dots = quadrature_ensemble(&qcfg, &mode).unwrap();
        assert!(dots.iter().all(|d| d.e_bind == 3.0));
    }

    #[test]
    fn sampled_field_mean_matches_area_average() {
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        let dots = sample_ensemble(&mc_cfg(1e5, 42), &mode).unwrap();
        let mean = dots.iter().map(|d| d.u).sum::<f64>() / dots.len() as f64;
        let oracle = bessel_area_average();
        assert!((oracle - 0.2695).abs() < 1e-3, "oracle sanity: {oracle}");
        assert!((mean - oracle).abs() < 5e-3, "mean={mean} oracle={oracle}");
    }

    #[test]
    fn same_seed_reproduces_bitwise() {
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        let a = sample_ensemble(&mc_cfg(5000.0, 99), &mode).unwrap();
        let b = sample_ensemble(&mc_cfg(5000.0, 99), &mode).unwrap();
        assert_eq!(a, b);
        let c = sample_ensemble(&mc_cfg(5000.0, 100), &mode).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn radial_cdf_matches_area_law() {
        // Kolmogorov-Smirnov against CDF(r) = r^2/R^2 at 1% significance.
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        let n = 100_000;
        let dots = sample_ensemble(&mc_cfg(n as f64, 7), &mode).unwrap();
        // Recover r from u = J0(z0 r/R)^2 monotonically: invert by bisection.
        let invert = |u: f64| {
            let (mut lo, mut hi) = (0.0, mode.radius);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if field_intensity(mid, &mode).unwrap() > u {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let mut radii: Vec<f64> = dots.iter().map(|d| invert(d.u)).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d_stat = 0.0_f64;
        for (i, &r) in radii.iter().enumerate() {
            let cdf = (r / mode.radius).powi(2);
            let emp_hi = (i + 1) as f64 / n as f64;
            let emp_lo = i as f64 / n as f64;
            d_stat = d_stat.max((cdf - emp_lo).abs()).max((emp_hi - cdf).abs());
        }
        // KS critical value at alpha = 0.01: 1.628 / sqrt(n), plus slack for
        // the 60-step bisection inversion.
        let critical = 1.628 / (n as f64).sqrt() + 1e-6;
        assert!(d_stat < critical, "D={d_stat} critical={critical}");
    }

    #[test]
    fn binding_mean_within_three_standard_errors() {
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        let n = 100_000;
        let dots = sample_ensemble(&mc_cfg(n as f64, 11), &mode).unwrap();
        let mean = dots.iter().map(|d| d.e_bind).sum::<f64>() / n as f64;
        let sigma = 0.6 / GAUSSIAN_FWHM_TO_SIGMA;
        let tol = 3.0 * sigma / (n as f64).sqrt();
        assert!((mean - 3.0).abs() < tol, "mean={mean} tol={tol}");
    }

    #[test]
    fn exciton_energies_stay_in_window() {
        let mode = hi_q_mode(ModeProfile::Uniform);
        let dots = sample_ensemble(&mc_cfg(20_000.0, 5), &mode).unwrap();
        let lo = 1300.0 - 10.0;
        let hi = 1300.0 + 10.0;
        assert!(dots.iter().all(|d| d.e_x >= lo && d.e_x < hi));
        assert!(dots
            .iter()
            .all(|d| (0.0..=1.0).contains(&d.u) && d.weight > 0.0));
    }

    #[test]
    fn quadrature_weights_sum_to_dot_count() {
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        for (nr, nb, ne) in [(1, 1, 4), (8, 4, 100), (64, 8, 997)] {
            let cfg = EnsembleConfig {
                radial_order: nr,
                binding_order: nb,
                energy_order: ne,
                n_dots: 12_345.0,
                ..EnsembleConfig::default()
            };
            let dots = quadrature_ensemble(&cfg, &mode).unwrap();
            assert_eq!(dots.len(), nr * nb * ne);
            assert!(dots.iter().all(|d| d.weight > 0.0));
            let total: f64 = dots.iter().map(|d| d.weight).sum();
            assert!((total - 12_345.0).abs() / 12_345.0 < 1e-12, "total={total}");
        }
    }

    #[test]
    fn radial_order_one_is_midpoint() {
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        let cfg = EnsembleConfig {
            radial_order: 1,
            binding_order: 1,
            energy_order: 1,
            n_dots: 1.0,
            ..EnsembleConfig::default()
        };
        let dots = quadrature_ensemble(&cfg, &mode).unwrap();
        assert_eq!(dots.len(), 1);
        // Single Gauss-Legendre node sits at R/2 and carries the full area.
        let u_mid = field_intensity(0.25, &mode).unwrap();
        assert_eq!(dots[0].u, u_mid);
        assert!((dots[0].weight - 1.0).abs() < 1e-14);
    }

    #[test]
    fn binding_order_one_hits_the_mean() {
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        let cfg = EnsembleConfig {
            radial_order: 2,
            binding_order: 1,
            energy_order: 3,
            binding_fwhm: 0.0,
            ..EnsembleConfig::default()
        };
        let dots = quadrature_ensemble(&cfg, &mode).unwrap();
        assert!(dots.iter().all(|d| d.e_bind == 3.0));
    }

    #[test]
    fn point_dot_collapses_radial_grid() {
        let mode = hi_q_mode(ModeProfile::PointDot);
        let cfg = EnsembleConfig {
            energy_order: 10,
            ..EnsembleConfig::default()
        };
        let dots = quadrature_ensemble(&cfg, &mode).unwrap();
        assert!(dots.iter().all(|d| d.u == 1.0));
        assert_eq!(dots.len(), 10 * cfg.binding_order);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mode = hi_q_mode(ModeProfile::BesselTruncated);
        let narrow = EnsembleConfig {
            window: 0.5,
            ..mc_cfg(100.0, 1)
        };
        assert!(matches!(
            sample_ensemble(&narrow, &mode),
            Err(EnsembleError::InvalidConfig {
                field: "window",
                ..
            })
        ));
        let none = EnsembleConfig {
            n_dots: 0.0,
            ..mc_cfg(100.0, 1)
        };
        assert!(sample_ensemble(&none, &mode).is_err());
        let bad_order = EnsembleConfig {
            radial_order: 0,
            energy_order: 5,
            ..Default::default()
        };
        assert!(quadrature_ensemble(&bad_order, &mode).is_err());
        // Mode mismatch between config and entry point.
        assert!(quadrature_ensemble(&mc_cfg(100.0, 1), &mode).is_err());
        assert!(sample_ensemble(&EnsembleConfig::default(), &mode).is_err());
    }

    #[test]
    fn smoothness_counts_lines_per_bin() {
        let mode = hi_q_mode(ModeProfile::Uniform);
        assert_eq!(
            smoothness_check(&[], &mode, 0.01),
            Err(EnsembleError::Empty)
        );

        // Counting oracle: uniform density puts n * bin / window lines in a bin.
        let dots = sample_ensemble(&mc_cfg(1e4, 21), &mode).unwrap();
        let report = smoothness_check(&dots, &mode, 0.01).unwrap();
        assert!((report.mean_lines_per_bin - 5.0).abs() < 1.0, "{report:?}");
        assert!(report.warn);

        let dots = sample_ensemble(&mc_cfg(1e6, 21), &mode).unwrap();
        let report = smoothness_check(&dots, &mode, 0.01).unwrap();
        assert!(
            (report.mean_lines_per_bin - 500.0).abs() < 25.0,
            "{report:?}"
        );
        assert!(!report.warn);

        let bad = smoothness_check(&dots, &mode, 0.0);
        assert_eq!(bad, Err(EnsembleError::BadBinWidth(0.0)));
    }
}
