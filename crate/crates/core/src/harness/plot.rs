use std::fmt::Write as _;
use std::path::Path;

use super::ResultTable;
use crate::error::{Error, Result};
use crate::metrics::MetricsRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    SpectralEfficiency,
    EnergyEfficiency,
}

impl PlotMetric {
    fn value(self, r: &MetricsRow) -> f64 {
        match self {
            PlotMetric::SpectralEfficiency => r.se,
            PlotMetric::EnergyEfficiency => r.ee,
        }
    }

    fn label(self) -> &'static str {
        match self {
            PlotMetric::SpectralEfficiency => "Spectral efficiency (bits/s/Hz)",
            PlotMetric::EnergyEfficiency => "Energy efficiency (normalized bits/J)",
        }
    }
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn series(table: &ResultTable, metric: PlotMetric) -> (&'static str, Vec<Series>) {
    let antennas = table.antenna_counts();
    if antennas.len() > 1 {
        let s = table
            .classes()
            .into_iter()
            .map(|n| Series {
                label: format!("Class {n}"),
                points: table.class_rows(n).iter().map(|r| (r.num_antennas as f64, metric.value(r))).collect(),
            })
            .collect();
        ("Number of BS antennas M", s)
    } else {
        let s = vec![Series {
            label: format!("M = {}", antennas[0]),
            points: table.rows.iter().map(|r| (r.class_n as f64, metric.value(r))).collect(),
        }];
        ("Class index n", s)
    }
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// Renders one curve per class (antenna sweeps) or one curve over class
/// index (class sweeps) as a standalone SVG document.
pub fn render_svg(table: &ResultTable, metric: PlotMetric) -> Result<String> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let (x_label, curves) = series(table, metric);
    let (x0, x1) = span(curves.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = span(curves.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = ((y0 - pad).max(if y0 >= 0.0 { 0.0 } else { f64::NEG_INFINITY }), y1 + pad);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0,
            tick(xv)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text class="x-label" x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text class="y-label" x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        metric.label()
    );
    for (i, s) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline data-series="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            s.label,
            pts.join(" ")
        );
        let ly = TOP + 15.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text class="legend" x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn tick(v: f64) -> String {
    if v.abs() >= 100.0 || v == v.round() {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

pub fn emit_plot(table: &ResultTable, metric: PlotMetric, path: &Path) -> Result<()> {
    let svg = render_svg(table, metric)?;
    std::fs::write(path, svg)?;
    Ok(())
}
