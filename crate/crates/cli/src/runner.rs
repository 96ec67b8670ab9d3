//! Subcommand drivers: scenario assembly from presets, config files and
//! flags; CSV/SVG emission with atomic writes; the acceptance runner.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process;

use pillarpl::acceptance;
use pillarpl::scenario::{PowerGrid, PreparedScenario};
use pillarpl::spectrum::{combine, convolve_lorentzian, normalize_peak};
use pillarpl::{Scenario, Spectrum};

use crate::config::{apply_config, parse_powers, to_manifest};
use crate::csvio::{spectrum_csv, sweep_csv};
use crate::svg::{line_plot, PlotOptions, Series};

/// Flags shared by the spectrum, sweep and preset subcommands.
#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Key/value config file applied over the defaults (and the preset)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Use a named preset as the starting scenario
    #[arg(long)]
    pub preset: Option<String>,
    /// Single pump power in units of the bulk decay rate
    #[arg(long)]
    pub power: Option<f64>,
    /// Pump power grid: start:stop:log|lin:count
    #[arg(long)]
    pub powers: Option<String>,
    /// Collection efficiencies, e.g. A=1,B=0.1
    #[arg(long)]
    pub collection: Option<String>,
    /// Monte-Carlo seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write SVG plots next to the CSV files
    #[arg(long)]
    pub plot: bool,
}

/// Exit codes: 0 success, 1 configuration error, 2 I/O error.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io { path: PathBuf, source: io::Error },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io { path, source } => {
                write!(f, "io error: {}: {source}", path.display())
            }
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io { .. } => 2,
        }
    }
}

fn config_err(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// Layering: defaults, then preset, then config file, then individual flags.
pub fn build_scenario(args: &RunArgs, preset: Option<&str>) -> Result<Scenario, CliError> {
    let mut scenario = Scenario::default();
    if let Some(name) = preset.or(args.preset.as_deref()) {
        scenario = Scenario::preset(name).map_err(config_err)?;
    }
    if let Some(path) = &args.config {
        // A missing or unreadable config file is a configuration error.
        let text = fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        scenario = apply_config(&scenario, &text)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    }
    if let Some(spec) = &args.powers {
        scenario.powers = parse_powers(spec).map_err(|e| config_err(format!("--powers: {e}")))?;
    }
    if let Some(p) = args.power {
        scenario.powers = PowerGrid::Single(p);
    }
    if let Some(spec) = &args.collection {
        let (a, b) = parse_collection(spec).map_err(config_err)?;
        scenario.collection.a = a;
        scenario.collection.b = b;
    }
    if let Some(seed) = args.seed {
        scenario.ensemble.seed = seed;
    }
    Ok(scenario)
}

/// `A=x,B=y` (either order, case-insensitive keys).
pub fn parse_collection(spec: &str) -> Result<(f64, f64), String> {
    let mut a = None;
    let mut b = None;
    for part in spec.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("--collection: expected A=x,B=y, got '{spec}'"))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|e| format!("--collection: bad value '{value}': {e}"))?;
        match key.trim().to_ascii_lowercase().as_str() {
            "a" => a = Some(v),
            "b" => b = Some(v),
            other => return Err(format!("--collection: unknown efficiency '{other}'")),
        }
    }
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(format!("--collection: need both A and B, got '{spec}'")),
    }
}

fn write_atomic(path: &Path, content: &str) -> Result<(), CliError> {
    let tmp = path.with_extension(format!("tmp{}", process::id()));
    let io_err = |source: io::Error| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    fs::write(&tmp, content).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

fn prepare(scenario: &Scenario, out: &Path) -> Result<PreparedScenario, CliError> {
    let prepared = scenario.prepare().map_err(config_err)?;
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })?;
    Ok(prepared)
}

fn normalize_or_zero(values: &[f64]) -> Vec<f64> {
    normalize_peak(values).unwrap_or_else(|_| values.to_vec())
}

/// Synthesizes one spectrum per configured power and writes raw and
/// peak-normalized CSVs plus the manifest (and SVG plots on request).
pub fn run_spectrum(scenario: &Scenario, out: &Path, plot: bool) -> Result<(), CliError> {
    let prepared = prepare(scenario, out)?;
    let dots = prepared.ensemble().map_err(config_err)?;
    let label = &prepared.scenario.label;
    for p in prepared.scenario.powers.values() {
        let mut spec: Spectrum = prepared.spectrum(&dots, p).map_err(config_err)?;
        let smoothing = prepared.scenario.smoothing_fwhm;
        if smoothing > 0.0 {
            spec.i_a = convolve_lorentzian(&spec.i_a, &spec.grid, smoothing);
            spec.i_b = convolve_lorentzian(&spec.i_b, &spec.grid, smoothing);
        }
        let detected = combine(&spec, &prepared.scenario.collection);
        write_atomic(
            &out.join(format!("{label}_P{p}.csv")),
            &spectrum_csv(&spec, &detected),
        )?;

        let norm = Spectrum {
            i_a: normalize_or_zero(&spec.i_a),
            i_b: normalize_or_zero(&spec.i_b),
            ..spec.clone()
        };
        let det_norm = normalize_or_zero(&detected);
        write_atomic(
            &out.join(format!("{label}_P{p}_norm.csv")),
            &spectrum_csv(&norm, &det_norm),
        )?;

        if plot {
            let centers = spec.grid.centers();
            let series = |label: &str, values: &[f64]| Series {
                label: label.to_string(),
                points: centers
                    .iter()
                    .cloned()
                    .zip(values.iter().cloned())
                    .collect(),
            };
            let svg = line_plot(
                &[
                    series("i_a (mode)", &spec.i_a),
                    series("i_b (leaky)", &spec.i_b),
                    series("detected", &detected),
                ],
                &PlotOptions {
                    title: format!("{label}: P = {p}"),
                    x_label: "energy (meV)".into(),
                    y_label: "photon rate per bin".into(),
                    log_x: false,
                },
            );
            write_atomic(&out.join(format!("{label}_P{p}.svg")), &svg)?;
        }
    }
    write_atomic(
        &out.join(format!("{label}_manifest.txt")),
        &to_manifest(&prepared.scenario),
    )?;
    Ok(())
}

/// Runs the power sweep and writes the per-power observables.
pub fn run_sweep(scenario: &Scenario, out: &Path, plot: bool) -> Result<(), CliError> {
    let prepared = prepare(scenario, out)?;
    let dots = prepared.ensemble().map_err(config_err)?;
    let sweep = prepared.sweep(&dots).map_err(config_err)?;
    let label = &prepared.scenario.label;
    write_atomic(
        &out.join(format!("{label}_sweep.csv")),
        &sweep_csv(&sweep.rows),
    )?;
    if plot {
        let svg = line_plot(
            &[Series {
                label: "q_measured".into(),
                points: sweep.rows.iter().map(|r| (r.power, r.q_measured)).collect(),
            }],
            &PlotOptions {
                title: format!("{label}: measured Q vs pump power"),
                x_label: "pump power (Gamma0)".into(),
                y_label: "measured Q".into(),
                log_x: true,
            },
        );
        write_atomic(&out.join(format!("{label}_sweep.svg")), &svg)?;
    }
    write_atomic(
        &out.join(format!("{label}_manifest.txt")),
        &to_manifest(&prepared.scenario),
    )?;
    Ok(())
}

/// Presets reproducing the standard figures; the fig2 pair are sweeps, the
/// rest are spectrum bundles over the preset power set.
pub fn run_preset(name: &str, args: &RunArgs) -> Result<(), CliError> {
    let scenario = build_scenario(args, Some(name))?;
    if name.starts_with("fig2") {
        run_sweep(&scenario, &args.out, args.plot)
    } else {
        run_spectrum(&scenario, &args.out, args.plot)
    }
}

/// Prints one pass/fail line per acceptance criterion; exit code 0 only if
/// every criterion passes.
pub fn run_check() -> i32 {
    let results = acceptance::run_all();
    let mut failures = 0;
    for r in &results {
        println!("{}", r.summary_line());
        if !r.passed {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("all {} criteria passed", results.len());
        0
    } else {
        println!("{failures} of {} criteria failed", results.len());
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collection_spec_parses_both_orders() {
        assert_eq!(parse_collection("A=1,B=0.5").unwrap(), (1.0, 0.5));
        assert_eq!(parse_collection("b=10,a=1").unwrap(), (1.0, 10.0));
        assert!(parse_collection("A=1").is_err());
        assert!(parse_collection("A=x,B=1").is_err());
        assert!(parse_collection("C=1,B=1").is_err());
    }

    #[test]
    fn flags_layer_over_presets() {
        let args = RunArgs {
            config: None,
            preset: Some("fig4".into()),
            power: Some(0.25),
            powers: None,
            collection: Some("A=0.2,B=0.9".into()),
            seed: Some(777),
            out: PathBuf::from("."),
            plot: false,
        };
        let s = build_scenario(&args, None).unwrap();
        assert_eq!(s.label, "fig4");
        assert_eq!(s.powers, PowerGrid::Single(0.25));
        assert_eq!((s.collection.a, s.collection.b), (0.2, 0.9));
        assert_eq!(s.ensemble.seed, 777);
    }

    #[test]
    fn missing_config_is_a_config_error() {
        let args = RunArgs {
            config: Some(PathBuf::from("/no/such/file.txt")),
            preset: None,
            power: None,
            powers: None,
            collection: None,
            seed: None,
            out: PathBuf::from("."),
            plot: false,
        };
        let err = build_scenario(&args, None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("config error"));
    }
}
