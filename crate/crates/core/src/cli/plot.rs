//! Minimal standalone SVG charts: axes, polylines, grouped bars, legend.

use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// One polyline; `None` values break the line.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, Option<f64>)>,
    pub dashed: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn header(out: &mut String, title: &str, xlabel: &str, ylabel: &str) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="{W}" height="{H}" fill="white"/>
<text x="{:.1}" y="25" text-anchor="middle" font-size="15">{}</text>
<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>
<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>
"#,
        (LEFT + W - RIGHT) / 2.0,
        escape(title),
        (LEFT + W - RIGHT) / 2.0,
        H - 15.0,
        escape(xlabel),
        (TOP + H - BOTTOM) / 2.0,
        (TOP + H - BOTTOM) / 2.0,
        escape(ylabel),
    );
}

fn axes(out: &mut String, (x0, x1): (f64, f64), (y0, y1): (f64, f64), x_ticks: bool) {
    let (px0, px1, py0, py1) = (LEFT, W - RIGHT, H - BOTTOM, TOP);
    let _ = writeln!(
        out,
        r#"<rect x="{px0}" y="{py1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        px1 - px0,
        py0 - py1
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let y = py0 + t * (py1 - py0);
        let _ = writeln!(
            out,
            r##"<line x1="{px0}" y1="{y:.1}" x2="{px1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"##,
            px0 - 6.0,
            y + 4.0,
            tick(y0 + t * (y1 - y0))
        );
        if x_ticks {
            let x = px0 + t * (px1 - px0);
            let _ = writeln!(
                out,
                r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                py0 + 18.0,
                tick(x0 + t * (x1 - x0))
            );
        }
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

fn legend(out: &mut String, entries: &[(String, &str, bool)]) {
    for (k, (label, color, dashed)) in entries.iter().enumerate() {
        let y = TOP + 12.0 + 20.0 * k as f64;
        let x = W - RIGHT + 15.0;
        let dash = if *dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.1}" y="{:.1}">{}</text>"#,
            x + 25.0,
            x + 31.0,
            y + 4.0,
            escape(label)
        );
    }
}

/// Line chart of `series` against a shared x axis.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let xs = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let ys = range(series.iter().flat_map(|s| s.points.iter().filter_map(|p| p.1)));
    let px = |x: f64| LEFT + (x - xs.0) / (xs.1 - xs.0) * (W - RIGHT - LEFT);
    let py = |y: f64| (H - BOTTOM) - (y - ys.0) / (ys.1 - ys.0) * (H - BOTTOM - TOP);
    let mut out = String::new();
    header(&mut out, title, xlabel, ylabel);
    axes(&mut out, xs, ys, true);
    let mut entries = Vec::new();
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k / 2 % PALETTE.len()];
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        for run in s.points.split(|p| p.1.is_none()).filter(|r| !r.is_empty()) {
            let pts: Vec<String> = run
                .iter()
                .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(y.expect("split on none"))))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
                pts.join(" ")
            );
        }
        entries.push((s.label.clone(), color, s.dashed));
    }
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

/// Grouped bar chart: one group per label, one bar per series inside it.
pub fn bar_chart(title: &str, ylabel: &str, series_labels: &[&str], groups: &[(String, Vec<f64>)]) -> String {
    let ys = range(groups.iter().flat_map(|g| g.1.iter().copied()).chain(std::iter::once(0.0)));
    let ys = (0.0f64.min(ys.0), ys.1);
    let py = |y: f64| (H - BOTTOM) - (y - ys.0) / (ys.1 - ys.0) * (H - BOTTOM - TOP);
    let mut out = String::new();
    header(&mut out, title, "", ylabel);
    axes(&mut out, (0.0, 1.0), ys, false);
    let slot = (W - RIGHT - LEFT) / groups.len().max(1) as f64;
    let nb = series_labels.len().max(1) as f64;
    let bar = 0.7 * slot / nb;
    for (g, (label, values)) in groups.iter().enumerate() {
        let gx = LEFT + slot * g as f64 + 0.15 * slot;
        for (b, v) in values.iter().enumerate() {
            let x = gx + bar * b as f64;
            let (y_top, y_base) = (py(v.max(0.0)), py(v.min(0.0)));
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y_top:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                bar * 0.95,
                y_base - y_top,
                PALETTE[b % PALETTE.len()]
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + slot * (g as f64 + 0.5),
            H - BOTTOM + 18.0,
            escape(label)
        );
    }
    let entries: Vec<(String, &str, bool)> = series_labels
        .iter()
        .enumerate()
        .map(|(k, l)| (l.to_string(), PALETTE[k % PALETTE.len()], false))
        .collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}
