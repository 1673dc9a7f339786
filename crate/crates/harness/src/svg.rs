//! Line charts of sweep results.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::sweep::SweepResult;

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// One polyline per classifier, its CI band as a polygon, and dashed bound
/// curves where present.
pub fn render_svg(result: &SweepResult, title: &str) -> String {
    let rows = &result.rows;
    let xs = rows.iter().map(|r| r.sweep_value);
    let (x0, x1) = span(
        xs.clone().fold(f64::INFINITY, f64::min),
        xs.fold(f64::NEG_INFINITY, f64::max),
    );
    let ys = rows
        .iter()
        .flat_map(|r| [r.ci_lo, r.ci_hi, r.mean_error].into_iter().chain(r.bound_value));
    let (y0, y1) = span(
        ys.clone().fold(f64::INFINITY, f64::min).min(0.0),
        ys.fold(f64::NEG_INFINITY, f64::max) * 1.05,
    );
    let (x0, x1, y0, y1) = if rows.is_empty() { (0.0, 1.0, 0.0, 1.0) } else { (x0, x1, y0, y1) };
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, (W - RIGHT + LEFT) / 2.0, escape(title));
    let (bx, by) = (H - BOTTOM, LEFT);
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{bx}" x2="{}" y2="{bx}" stroke="black"/>"#, W - RIGHT);
    let _ = writeln!(s, r#"<line x1="{by}" y1="{TOP}" x2="{by}" y2="{bx}" stroke="black"/>"#);
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(s, r#"<line x1="{tx:.2}" y1="{bx}" x2="{tx:.2}" y2="{}" stroke="black"/>"#, bx + 5.0);
        let _ = writeln!(s, r#"<text x="{tx:.2}" y="{}" text-anchor="middle">{}</text>"#, bx + 19.0, tick(xv));
        let _ = writeln!(s, r#"<line x1="{}" y1="{ty:.2}" x2="{by}" y2="{ty:.2}" stroke="black"/>"#, by - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, by - 8.0, ty + 4.0, tick(yv));
    }
    if let Some(r) = rows.first() {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (W - RIGHT + LEFT) / 2.0, H - 10.0, escape(&r.sweep_name));
    }

    for (i, name) in result.classifiers().into_iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut series = result.series(name);
        series.sort_by(|a, b| a.sweep_value.total_cmp(&b.sweep_value));
        let coord = |x: f64, y: f64| format!("{:.2},{:.2}", px(x), py(y));
        let mut band: Vec<String> = series.iter().map(|r| coord(r.sweep_value, r.ci_hi)).collect();
        band.extend(series.iter().rev().map(|r| coord(r.sweep_value, r.ci_lo)));
        let _ = writeln!(s, r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#, band.join(" "));
        let line: Vec<String> = series.iter().map(|r| coord(r.sweep_value, r.mean_error)).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, line.join(" "));
        let bounded: Vec<_> = series.iter().filter(|r| r.bound_value.is_some()).collect();
        if !bounded.is_empty() {
            let d: Vec<String> = bounded
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    let cmd = if j == 0 { "M" } else { "L" };
                    format!("{cmd}{}", coord(r.sweep_value, r.bound_value.unwrap_or(0.0)))
                })
                .collect();
            let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{color}" stroke-dasharray="6 4"/>"#, d.join(" "));
        }
        let ly = TOP + 20.0 * i as f64;
        let lx = W - RIGHT + 15.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        let t = format!("{v:.4}");
        t.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

pub fn write_svg(result: &SweepResult, title: &str, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(result, title)).map_err(HarnessError::io(path))
}
