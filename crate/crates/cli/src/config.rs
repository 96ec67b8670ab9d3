//! Flat key/value configuration format shared by config files and run
//! manifests. Every key has a default taken from the base scenario, so a
//! config file only needs the keys it wants to change; a manifest written by
//! the tool carries every key and reproduces the run exactly.

use pillarpl::analysis::QChannel;
use pillarpl::cavity::{ModeProfile, PurcellInputs};
use pillarpl::dynamics::BiexcitonCoupling;
use pillarpl::ensemble::EnsembleMode;
use pillarpl::scenario::{GridScale, PowerGrid};
use pillarpl::Scenario;

/// Applies `key = value` lines from `text` on top of `base`.
pub fn apply_config(base: &Scenario, text: &str) -> Result<Scenario, String> {
    let mut s = base.clone();
    // Carried alongside so a lambda/n/v_eff triple can arrive in any order.
    let mut purcell = s.purcell_inputs.unwrap_or(PurcellInputs {
        q: s.mode.q,
        v_eff: 0.0,
        lambda_vac: 953.7,
        n_index: 3.5,
    });
    let mut v_eff_set = purcell.v_eff > 0.0;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = lineno + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {n}: expected 'key = value', got '{line}'"))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| format!("line {n}: invalid value for {key}: {what}");
        let float = |v: &str| v.parse::<f64>().map_err(|e| bad(&e.to_string()));
        let uint = |v: &str| v.parse::<u64>().map_err(|e| bad(&e.to_string()));
        match key {
            "label" => s.label = value.to_string(),
            "e0_mev" => s.mode.e0 = float(value)?,
            "q" => s.mode.q = float(value)?,
            "fp" => s.mode.fp = float(value)?,
            "v_eff_um3" => {
                purcell.v_eff = float(value)?;
                v_eff_set = purcell.v_eff > 0.0;
            }
            "lambda_nm" => purcell.lambda_vac = float(value)?,
            "n_index" => purcell.n_index = float(value)?,
            "gamma_leak" => s.mode.gamma_leak = float(value)?,
            "radius_um" => s.mode.radius = float(value)?,
            "profile" => {
                s.mode.profile = match value {
                    "bessel" => ModeProfile::BesselTruncated,
                    "gaussian" => ModeProfile::Gaussian,
                    "uniform" => ModeProfile::Uniform,
                    "point" => ModeProfile::PointDot,
                    other => {
                        return Err(bad(&format!(
                            "'{other}' (expected bessel, gaussian, uniform or point)"
                        )))
                    }
                }
            }
            "ensemble_mode" => {
                s.ensemble.mode = match value {
                    "quadrature" => EnsembleMode::Quadrature,
                    "montecarlo" => EnsembleMode::MonteCarlo,
                    other => {
                        return Err(bad(&format!(
                            "'{other}' (expected quadrature or montecarlo)"
                        )))
                    }
                }
            }
            "n_dots" => s.ensemble.n_dots = float(value)?,
            "radial_order" => s.ensemble.radial_order = uint(value)? as usize,
            "energy_order" => s.ensemble.energy_order = uint(value)? as usize,
            "binding_order" => s.ensemble.binding_order = uint(value)? as usize,
            "window_mev" => s.ensemble.window = float(value)?,
            "binding_mean_mev" => s.ensemble.binding_mean = float(value)?,
            "binding_fwhm_mev" => s.ensemble.binding_fwhm = float(value)?,
            "seed" => s.ensemble.seed = uint(value)?,
            "collection_a" => s.collection.a = float(value)?,
            "collection_b" => s.collection.b = float(value)?,
            "powers" => s.powers = parse_powers(value).map_err(|e| bad(&e))?,
            "bin_width_mev" => s.bin_width = float(value)?,
            "smoothing_fwhm_mev" => s.smoothing_fwhm = float(value)?,
            "q_channel" => {
                s.q_channel = match value {
                    "mode" => QChannel::ModeOnly,
                    "combined" => QChannel::Combined,
                    other => return Err(bad(&format!("'{other}' (expected mode or combined)"))),
                }
            }
            "biexciton_coupling" => {
                s.coupling = match value {
                    "biexciton" => BiexcitonCoupling::BiexcitonEnergy,
                    "exciton" => BiexcitonCoupling::ExcitonEnergy,
                    other => {
                        return Err(bad(&format!("'{other}' (expected biexciton or exciton)")))
                    }
                }
            }
            other => return Err(format!("line {n}: unknown key '{other}'")),
        }
    }
    purcell.q = s.mode.q;
    s.purcell_inputs = if v_eff_set { Some(purcell) } else { None };
    Ok(s)
}

/// `X` for a single power; `start:stop:log|lin:count` for a grid.
pub fn parse_powers(value: &str) -> Result<PowerGrid, String> {
    if !value.contains(':') {
        let p = value.parse::<f64>().map_err(|e| e.to_string())?;
        return Ok(PowerGrid::Single(p));
    }
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 4 {
        return Err(format!("'{value}' (expected start:stop:log|lin:count)"));
    }
    let start = parts[0].parse::<f64>().map_err(|e| format!("start: {e}"))?;
    let stop = parts[1].parse::<f64>().map_err(|e| format!("stop: {e}"))?;
    let scale = match parts[2] {
        "log" => GridScale::Log,
        "lin" => GridScale::Lin,
        other => return Err(format!("scale '{other}' (expected log or lin)")),
    };
    let count = parts[3]
        .parse::<usize>()
        .map_err(|e| format!("count: {e}"))?;
    Ok(PowerGrid::Grid {
        start,
        stop,
        scale,
        count,
    })
}

fn powers_string(p: &PowerGrid) -> String {
    match *p {
        PowerGrid::Single(v) => format!("{v}"),
        PowerGrid::Grid {
            start,
            stop,
            scale,
            count,
        } => {
            let scale = match scale {
                GridScale::Log => "log",
                GridScale::Lin => "lin",
            };
            format!("{start}:{stop}:{scale}:{count}")
        }
    }
}

/// Serializes a fully resolved scenario; reading this text back through
/// [`apply_config`] reproduces the identical run.
pub fn to_manifest(s: &Scenario) -> String {
    let profile = match s.mode.profile {
        ModeProfile::BesselTruncated => "bessel",
        ModeProfile::Gaussian => "gaussian",
        ModeProfile::Uniform => "uniform",
        ModeProfile::PointDot => "point",
    };
    let ensemble_mode = match s.ensemble.mode {
        EnsembleMode::Quadrature => "quadrature",
        EnsembleMode::MonteCarlo => "montecarlo",
    };
    let q_channel = match s.q_channel {
        QChannel::ModeOnly => "mode",
        QChannel::Combined => "combined",
    };
    let coupling = match s.coupling {
        BiexcitonCoupling::BiexcitonEnergy => "biexciton",
        BiexcitonCoupling::ExcitonEnergy => "exciton",
    };
    // The Purcell factor is written resolved; v_eff_um3 = 0 keeps it as-is.
    format!(
        "label = {}\n\
         e0_mev = {}\n\
         q = {}\n\
         fp = {}\n\
         v_eff_um3 = 0\n\
         lambda_nm = 953.7\n\
         n_index = 3.5\n\
         gamma_leak = {}\n\
         radius_um = {}\n\
         profile = {}\n\
         ensemble_mode = {}\n\
         n_dots = {}\n\
         radial_order = {}\n\
         energy_order = {}\n\
         binding_order = {}\n\
         window_mev = {}\n\
         binding_mean_mev = {}\n\
         binding_fwhm_mev = {}\n\
         seed = {}\n\
         collection_a = {}\n\
         collection_b = {}\n\
         powers = {}\n\
         bin_width_mev = {}\n\
         smoothing_fwhm_mev = {}\n\
         q_channel = {}\n\
         biexciton_coupling = {}\n",
        s.label,
        s.mode.e0,
        s.mode.q,
        s.mode.fp,
        s.mode.gamma_leak,
        s.mode.radius,
        profile,
        ensemble_mode,
        s.ensemble.n_dots,
        s.ensemble.radial_order,
        s.ensemble.energy_order,
        s.ensemble.binding_order,
        s.ensemble.window,
        s.ensemble.binding_mean,
        s.ensemble.binding_fwhm,
        s.ensemble.seed,
        s.collection.a,
        s.collection.b,
        powers_string(&s.powers),
        s.bin_width,
        s.smoothing_fwhm,
        q_channel,
        coupling,
    )
}
