//! CSV emission and parsing. Floats are written with Rust's shortest
//! round-trip formatting, so parse(emit(x)) returns x bit for bit.

use pillarpl::analysis::SweepRow;
use pillarpl::Spectrum;

pub const SPECTRUM_HEADER: &str = "energy_meV,i_a,i_b,i_detected";
pub const SWEEP_HEADER: &str = "power_gamma0,q_measured,e_peak_meV,fwhm_meV,dip_contrast";

pub fn spectrum_csv(spec: &Spectrum, detected: &[f64]) -> String {
    let mut out = String::with_capacity(spec.grid.n_bins * 48);
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for (i, ((a, b), det)) in spec.i_a.iter().zip(&spec.i_b).zip(detected).enumerate() {
        out.push_str(&format!("{},{},{},{}\n", spec.grid.center(i), a, b, det));
    }
    out
}

/// Parsed spectrum rows: energy, i_a, i_b, i_detected.
#[derive(Debug)]
pub struct SpectrumRows {
    pub energy: Vec<f64>,
    pub i_a: Vec<f64>,
    pub i_b: Vec<f64>,
    pub detected: Vec<f64>,
}

pub fn parse_spectrum_csv(text: &str) -> Result<SpectrumRows, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    if header != SPECTRUM_HEADER {
        return Err(format!("unexpected header '{header}'"));
    }
    let mut rows = SpectrumRows {
        energy: Vec::new(),
        i_a: Vec::new(),
        i_b: Vec::new(),
        detected: Vec::new(),
    };
    for (n, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols = parse_floats(line, 4).map_err(|e| format!("row {}: {e}", n + 2))?;
        rows.energy.push(cols[0]);
        rows.i_a.push(cols[1]);
        rows.i_b.push(cols[2]);
        rows.detected.push(cols[3]);
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.power, r.q_measured, r.e_peak, r.fwhm, r.dip_contrast
        ));
    }
    out
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    if header != SWEEP_HEADER {
        return Err(format!("unexpected header '{header}'"));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols = parse_floats(line, 5).map_err(|e| format!("row {}: {e}", n + 2))?;
        rows.push(SweepRow {
            power: cols[0],
            q_measured: cols[1],
            e_peak: cols[2],
            fwhm: cols[3],
            dip_contrast: cols[4],
        });
    }
    Ok(rows)
}

fn parse_floats(line: &str, want: usize) -> Result<Vec<f64>, String> {
    let cols: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
    let cols = cols.map_err(|e| e.to_string())?;
    if cols.len() != want {
        return Err(format!("expected {want} columns, got {}", cols.len()));
    }
    Ok(cols)
}
