//! A complete run configuration: cavity mode, ensemble, collection geometry,
//! pump powers and extraction options, with the figure presets and the
//! plumbing that aligns the quadrature energy comb with the spectrum grid.

use thiserror::Error;

use crate::analysis::{power_sweep, QChannel, SweepResult};
use crate::cavity::{purcell_factor, CavityMode, ModeProfile, PurcellInputs};
use crate::dynamics::BiexcitonCoupling;
use crate::ensemble::{generate, EnsembleConfig, EnsembleMode, QuantumDot};
use crate::spectrum::{synthesize_with, CollectionGeometry, GridSpec, Spectrum};

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("{field}: {message}")]
    Field {
        field: &'static str,
        message: String,
    },
    #[error("unknown preset '{0}'; valid presets: {}", PRESET_NAMES.join(", "))]
    UnknownPreset(String),
}

fn field_err(field: &'static str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Field {
        field,
        message: message.into(),
    }
}

/// Pump power specification: a single power or a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerGrid {
    Single(f64),
    Grid {
        start: f64,
        stop: f64,
        scale: GridScale,
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Log,
    Lin,
}

impl PowerGrid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            PowerGrid::Single(p) => vec![p],
            PowerGrid::Grid {
                start,
                stop,
                scale,
                count,
            } => {
                if count == 1 {
                    return vec![start];
                }
                let n = (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        let t = i as f64 / n;
                        match scale {
                            GridScale::Lin => start + t * (stop - start),
                            // Base-10 interpolation keeps decade grids exact.
                            GridScale::Log => {
                                10f64.powf(start.log10() + t * (stop.log10() - start.log10()))
                            }
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        match *self {
            PowerGrid::Single(p) => {
                if !crate::finite_nonneg(p) {
                    return Err(field_err("power", format!("must be non-negative, got {p}")));
                }
            }
            PowerGrid::Grid {
                start,
                stop,
                scale,
                count,
            } => {
                if count == 0 {
                    return Err(field_err("powers", "count must be >= 1"));
                }
                let ordered = start.is_finite() && stop.is_finite() && start <= stop;
                if !ordered {
                    return Err(field_err(
                        "powers",
                        format!("need start <= stop, got {start}:{stop}"),
                    ));
                }
                if scale == GridScale::Log && start <= 0.0 {
                    return Err(field_err("powers", "log grid needs start > 0"));
                }
                if scale == GridScale::Lin && start < 0.0 {
                    return Err(field_err("powers", "powers must be non-negative"));
                }
            }
        }
        Ok(())
    }
}

/// Everything needed for one run. Every field has a default, so presets and
/// the CLI can fill only what they care about.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Tag used for output file names.
    pub label: String,
    pub mode: CavityMode,
    /// When set, the Purcell factor is computed from (Q, V, lambda, n) and
    /// overrides `mode.fp` during preparation.
    pub purcell_inputs: Option<PurcellInputs>,
    pub ensemble: EnsembleConfig,
    pub collection: CollectionGeometry,
    pub powers: PowerGrid,
    /// Spectrum bin width in meV; 0 selects the default (E0/Q)/20.
    pub bin_width: f64,
    /// Display smoothing FWHM in meV; 0 disables it (regression paths).
    pub smoothing_fwhm: f64,
    pub q_channel: QChannel,
    pub coupling: BiexcitonCoupling,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            label: "custom".to_string(),
            mode: CavityMode {
                e0: 1300.0,
                q: 15000.0,
                fp: 189.0,
                gamma_leak: 1.0,
                radius: 0.5,
                profile: ModeProfile::BesselTruncated,
            },
            purcell_inputs: None,
            ensemble: EnsembleConfig::default(),
            collection: CollectionGeometry { a: 1.0, b: 0.0 },
            powers: PowerGrid::Single(0.01),
            bin_width: 0.0,
            smoothing_fwhm: 0.0,
            q_channel: QChannel::ModeOnly,
            coupling: BiexcitonCoupling::BiexcitonEnergy,
        }
    }
}

pub const PRESET_NAMES: [&str; 6] = ["fig1", "fig2-loQ", "fig2-hiQ", "fig3", "fig4", "fig5"];

/// The six log-spaced decades covering the quoted pump range.
const PRESET_POWERS: PowerGrid = PowerGrid::Grid {
    start: 0.01,
    stop: 1000.0,
    scale: GridScale::Log,
    count: 6,
};

const SWEEP_POWERS: PowerGrid = PowerGrid::Grid {
    start: 0.01,
    stop: 1000.0,
    scale: GridScale::Log,
    count: 25,
};

impl Scenario {
    /// The two pillars studied throughout: 1 um diameter with Q = 2300
    /// (Fp = 28) or Q = 15000 (Fp = 189).
    fn pillar(q: f64, fp: f64) -> CavityMode {
        CavityMode {
            e0: 1300.0,
            q,
            fp,
            gamma_leak: 1.0,
            radius: 0.5,
            profile: ModeProfile::BesselTruncated,
        }
    }

    /// Named presets reproducing the standard figures.
    pub fn preset(name: &str) -> Result<Scenario, ScenarioError> {
        let base = Scenario {
            label: name.to_string(),
            ..Scenario::default()
        };
        match name {
            // Mode-photon spectra of the high-Q pillar across six decades.
            "fig1" => Ok(Scenario {
                mode: Self::pillar(15000.0, 189.0),
                collection: CollectionGeometry { a: 1.0, b: 0.0 },
                powers: PRESET_POWERS,
                ..base
            }),
            // Measured-Q power sweeps for the two pillars.
            "fig2-loQ" => Ok(Scenario {
                mode: Self::pillar(2300.0, 28.0),
                collection: CollectionGeometry { a: 1.0, b: 0.0 },
                powers: SWEEP_POWERS,
                ..base
            }),
            "fig2-hiQ" => Ok(Scenario {
                mode: Self::pillar(15000.0, 189.0),
                collection: CollectionGeometry { a: 1.0, b: 0.0 },
                powers: SWEEP_POWERS,
                ..base
            }),
            // Leaky-channel spectra: the mode shows up as a dip.
            "fig3" => Ok(Scenario {
                mode: Self::pillar(15000.0, 189.0),
                collection: CollectionGeometry { a: 0.0, b: 1.0 },
                powers: PRESET_POWERS,
                ..base
            }),
            // All photons collected: flat at low power.
            "fig4" => Ok(Scenario {
                mode: Self::pillar(15000.0, 189.0),
                collection: CollectionGeometry { a: 1.0, b: 1.0 },
                powers: PRESET_POWERS,
                ..base
            }),
            // Leaky-favoring collection B = 10 A: dip-to-peak crossover.
            "fig5" => Ok(Scenario {
                mode: Self::pillar(15000.0, 189.0),
                collection: CollectionGeometry { a: 0.1, b: 1.0 },
                powers: PRESET_POWERS,
                ..base
            }),
            other => Err(ScenarioError::UnknownPreset(other.to_string())),
        }
    }

    /// Default bin width: twenty bins per mode linewidth.
    pub fn resolved_bin_width(&self) -> f64 {
        if self.bin_width > 0.0 {
            self.bin_width
        } else {
            self.mode.fwhm() / 20.0
        }
    }

    /// Validates all fields and resolves the derived quantities (Purcell
    /// factor from mode volume, auto bin width, aligned energy comb, grid
    /// margins) into a ready-to-run plan.
    pub fn prepare(&self) -> Result<PreparedScenario, ScenarioError> {
        let mut scenario = self.clone();
        if let Some(inputs) = &scenario.purcell_inputs {
            scenario.mode.fp =
                purcell_factor(inputs).map_err(|e| field_err("purcell", e.to_string()))?;
        }
        scenario
            .mode
            .validate()
            .map_err(|e| field_err("mode", e.to_string()))?;
        scenario
            .collection
            .validate()
            .map_err(|e| field_err("collection", e.to_string()))?;
        scenario.powers.validate()?;
        if !crate::finite_nonneg(scenario.bin_width) {
            return Err(field_err(
                "bin_width",
                format!("must be >= 0, got {}", scenario.bin_width),
            ));
        }
        if !crate::finite_nonneg(scenario.smoothing_fwhm) {
            return Err(field_err(
                "smoothing_fwhm",
                format!("must be >= 0, got {}", scenario.smoothing_fwhm),
            ));
        }
        let bin = scenario.resolved_bin_width();
        let max_bin = scenario.mode.fwhm() / 10.0;
        if bin > max_bin {
            return Err(field_err(
                "bin_width",
                format!("{bin} meV exceeds a tenth of the mode linewidth ({max_bin} meV)"),
            ));
        }

        // Quadrature mode: pin the energy comb to the bin grid, one node per
        // bin, so the uniform density histograms without ripple.
        if scenario.ensemble.mode == EnsembleMode::Quadrature {
            if scenario.ensemble.energy_order == 0 {
                scenario.ensemble.energy_order =
                    (scenario.ensemble.window / bin).round().max(1.0) as usize;
            }
            scenario.ensemble.window = scenario.ensemble.energy_order as f64 * bin;
        }
        scenario
            .ensemble
            .validate(&scenario.mode)
            .map_err(|e| field_err("ensemble", e.to_string()))?;

        // Grid: the exciton window plus margins. Red-shifted biexciton lines
        // need room below; twelve sigma of binding spread is far past any
        // quadrature node and any realistic Monte-Carlo draw.
        let margin_lo_mev =
            scenario.ensemble.binding_mean + 12.0 * scenario.ensemble.binding_sigma();
        let margin_lo = (margin_lo_mev / bin).ceil() as usize + 2;
        let margin_hi = 2;
        let window_lo = scenario.ensemble.window_lo(&scenario.mode);
        let n_window = if scenario.ensemble.mode == EnsembleMode::Quadrature {
            scenario.ensemble.energy_order
        } else {
            (scenario.ensemble.window / bin).ceil() as usize
        };
        let grid = GridSpec {
            e_min: window_lo - margin_lo as f64 * bin,
            bin_width: bin,
            n_bins: n_window + margin_lo + margin_hi,
        };
        Ok(PreparedScenario { scenario, grid })
    }
}

/// A validated scenario with its energy grid, ready to generate ensembles
/// and spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedScenario {
    pub scenario: Scenario,
    pub grid: GridSpec,
}

impl PreparedScenario {
    pub fn ensemble(&self) -> Result<Vec<QuantumDot>, ScenarioError> {
        generate(&self.scenario.ensemble, &self.scenario.mode)
            .map_err(|e| field_err("ensemble", e.to_string()))
    }

    pub fn spectrum(&self, dots: &[QuantumDot], p: f64) -> Result<Spectrum, ScenarioError> {
        synthesize_with(
            dots,
            &self.scenario.mode,
            p,
            &self.grid,
            self.scenario.coupling,
        )
        .map_err(|e| field_err("spectrum", e.to_string()))
    }

    /// Runs the scenario's power grid over a shared ensemble.
    pub fn sweep(&self, dots: &[QuantumDot]) -> Result<SweepResult, ScenarioError> {
        let powers = self.scenario.powers.values();
        power_sweep(
            dots,
            &self.scenario.mode,
            &self.grid,
            &self.scenario.collection,
            &powers,
            self.scenario.q_channel,
            self.scenario.coupling,
        )
        .map_err(|e| field_err("sweep", e.to_string()))
    }
}
