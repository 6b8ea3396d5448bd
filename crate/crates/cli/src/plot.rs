//! Minimal SVG charts for `--plot`.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn frame(out: &mut String, title: &str, ylo: f64, yhi: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        out,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD / 2.0
    );
    let _ = writeln!(out, r#"<text x="4" y="{}">{:.3}</text>"#, PAD + 4.0, yhi);
    let _ = writeln!(out, r#"<text x="4" y="{}">{:.3}</text>"#, H - PAD, ylo);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart of one or more `(x, y)` series.
pub fn lines(title: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let (xlo, xhi) = bounds(series.iter().flat_map(|s| s.1.iter().map(|p| p.0)));
    let (ylo, yhi) = bounds(series.iter().flat_map(|s| s.1.iter().map(|p| p.1)));
    let sx = |x: f64| PAD + (x - xlo) / (xhi - xlo) * (W - 1.5 * PAD);
    let sy = |y: f64| H - PAD - (y - ylo) / (yhi - ylo) * (H - 2.0 * PAD);
    let mut out = String::new();
    frame(&mut out, title, ylo, yhi);
    for (k, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let d: Vec<String> = pts
            .iter()
            .filter(|p| p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            d.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            W - 1.5 * PAD,
            PAD + 14.0 * k as f64,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Bar chart of means with ±1 standard deviation whiskers.
pub fn bars(title: &str, bars: &[(String, f64, f64)]) -> String {
    let (lo, hi) = bounds(bars.iter().flat_map(|b| [b.1 - b.2, b.1 + b.2]));
    let ylo = lo.min(0.0);
    let sy = |y: f64| H - PAD - (y - ylo) / (hi - ylo) * (H - 2.0 * PAD);
    let slot = (W - 1.5 * PAD) / bars.len().max(1) as f64;
    let mut out = String::new();
    frame(&mut out, title, ylo, hi);
    for (k, (label, mean, std)) in bars.iter().enumerate() {
        let x = PAD + slot * (k as f64 + 0.2);
        let w = slot * 0.6;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{:.2}" width="{w:.2}" height="{:.2}" fill="{}"/>"#,
            sy(*mean),
            sy(ylo) - sy(*mean),
            COLORS[k % COLORS.len()]
        );
        let cx = x + w / 2.0;
        let _ = writeln!(
            out,
            r#"<path d="M{cx:.2} {:.2} V{:.2}" stroke="black"/>"#,
            sy(mean + std),
            sy(mean - std)
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx:.2}" y="{}" text-anchor="middle">{}</text>"#,
            H - PAD + 16.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}
