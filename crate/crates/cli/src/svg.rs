//! Minimal self-contained SVG line plots; no external renderer. Plots are a
//! viewing convenience, the CSV files are the data contract.

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct PlotOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
}

fn tick_format(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if !(1e-3..1e4).contains(&a) {
        format!("{v:.1e}")
    } else if a >= 10.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

pub fn line_plot(series: &[Series], opts: &PlotOptions) -> String {
    let tx = |v: f64| if opts.log_x { v.log10() } else { v };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            let x = tx(x);
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() || x_max <= x_min {
        x_max = x_min + 1.0;
    }
    if !y_min.is_finite() || y_max <= y_min {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    let (y_lo, y_hi) = (y_min - pad, y_max + pad);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = move |x: f64| MARGIN_L + (tx(x) - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(&opts.title)
    ));
    // Axes.
    out.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    // Ticks: 6 in x, 6 in y.
    for i in 0..=5 {
        let fx = i as f64 / 5.0;
        let x_val = x_min + fx * (x_max - x_min);
        let x_px = MARGIN_L + fx * plot_w;
        let label = if opts.log_x {
            tick_format(10f64.powf(x_val))
        } else {
            tick_format(x_val)
        };
        out.push_str(&format!(
            "<line x1=\"{x_px:.1}\" y1=\"{:.1}\" x2=\"{x_px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n\
             <text x=\"{x_px:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{label}</text>\n",
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 6.0,
            MARGIN_T + plot_h + 20.0,
        ));
        let y_val = y_lo + fx * (y_hi - y_lo);
        let y_px = MARGIN_T + plot_h - fx * plot_h;
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y_px:.1}\" x2=\"{MARGIN_L}\" y2=\"{y_px:.1}\" stroke=\"black\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 6.0,
            MARGIN_L - 9.0,
            y_px + 4.0,
            tick_format(y_val)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(&opts.x_label)
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        escape(&opts.y_label)
    ));
    // Series polylines and legend.
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        ));
        let ly = MARGIN_T + 16.0 + 16.0 * k as f64;
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            MARGIN_L + plot_w - 150.0,
            MARGIN_L + plot_w - 125.0,
            MARGIN_L + plot_w - 120.0,
            ly + 4.0,
            escape(&s.label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
