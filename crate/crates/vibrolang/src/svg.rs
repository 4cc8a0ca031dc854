//! Minimal SVG line plots.

use std::fmt::Write;

use crate::table::Table;

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Render the table's plot spec, or `None` when it has none.
pub fn render(t: &Table) -> Option<String> {
    let plot = t.plot.as_ref()?;
    let x = t.column(0);
    let ys: Vec<Vec<f64>> = plot.series.iter().map(|&i| t.column(i)).collect();
    let tf = |v: f64| if plot.log_y { if v > 0.0 { Some(v.log10()) } else { None } } else { Some(v).filter(|v| v.is_finite()) };

    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in x.iter().filter(|v| v.is_finite()) {
        x0 = x0.min(v);
        x1 = x1.max(v);
    }
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in ys.iter().flatten().filter_map(|&v| tf(v)) {
        y0 = y0.min(v);
        y1 = y1.max(v);
    }
    if !(x0 < x1) {
        x1 = x0 + 1.0;
    }
    if plot.log_y {
        // keep ten decades below the maximum
        y0 = y0.max(y1 - 10.0);
    }
    if !(y0 < y1) {
        y0 -= 0.5;
        y1 = y0 + 1.0;
    }
    if !x0.is_finite() || !y0.is_finite() {
        return None;
    }
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v - x0) / (x1 - x0) * pw;
    let sy = |v: f64| TOP + (1.0 - (v.max(y0) - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#, W / 2.0, esc(&plot.title));
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, tick(xv));
        let _ = writeln!(s, r#"<line x1="{}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 5.0);
        let label = if plot.log_y { format!("1e{}", tick(yv)) } else { tick(yv) };
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{label}</text>"#, LEFT - 8.0, py + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 12.0, esc(&t.header[0]));

    for (k, (&col, y)) in plot.series.iter().zip(&ys).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut d = String::new();
        let mut pen = false;
        for (&xv, &yv) in x.iter().zip(y) {
            match tf(yv) {
                Some(v) if xv.is_finite() => {
                    let _ = write!(d, "{}{:.2},{:.2} ", if pen { "L" } else { "M" }, sx(xv), sy(v));
                    pen = true;
                }
                _ => pen = false,
            }
        }
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.3"/>"#, d.trim_end());
        let ly = TOP + 14.0 + 16.0 * k as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="12" fill="{color}" text-anchor="end">{}</text>"#, W - RIGHT - 8.0, esc(&t.header[col]));
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.to_string() }
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
