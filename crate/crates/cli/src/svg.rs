//! Standalone SVG 1.1 line plots: one polyline per column, linear axes with
//! tick labels and a legend. Output bytes depend only on the input data.

use std::fmt::Write as _;
use std::path::Path;

use jc_core::analysis::{LambdaScan, TimeSeries};
use thiserror::Error;

use crate::csv::write_atomic;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;

const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const DASHES: [&str; 3] = ["", "6,4", "2,3"];

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("nothing to plot: {0}")]
    Empty(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub title: String,
    pub x_label: String,
    pub x: Vec<f64>,
    pub curves: Vec<Curve>,
    /// Fixed y-axis range; derived from the data when `None`.
    pub y_range: Option<(f64, f64)>,
}

impl PlotData {
    pub fn from_time_series(series: &TimeSeries, title: &str) -> Self {
        PlotData {
            title: title.to_string(),
            x_label: "t".into(),
            x: series.times().to_vec(),
            curves: series
                .columns()
                .iter()
                .map(|c| Curve {
                    name: c.name.clone(),
                    values: c.values.clone(),
                })
                .collect(),
            y_range: None,
        }
    }

    pub fn from_lambda_scan(scan: &LambdaScan, title: &str) -> Self {
        PlotData {
            title: title.to_string(),
            x_label: "lambda0".into(),
            x: scan.lambdas.clone(),
            curves: scan
                .ks
                .iter()
                .zip(&scan.dem_at_t)
                .map(|(k, v)| Curve {
                    name: format!("dem_T{k}"),
                    values: v.clone(),
                })
                .collect(),
            y_range: None,
        }
    }

    pub fn with_y_range(mut self, lo: f64, hi: f64) -> Self {
        self.y_range = Some((lo, hi));
        self
    }
}

/// Tick positions covering `[lo, hi]` with a 1-2-5 step.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step - 1e-9).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn data_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.filter(|v| v.is_finite()).fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn padded((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

pub fn render_svg(plot: &PlotData) -> Result<String, PlotError> {
    if plot.x.is_empty() || plot.curves.is_empty() {
        return Err(PlotError::Empty(format!(
            "'{}' has no samples or no columns",
            plot.title
        )));
    }
    if let Some(c) = plot
        .curves
        .iter()
        .find(|c| c.values.len() != plot.x.len() || c.values.is_empty())
    {
        return Err(PlotError::Empty(format!(
            "column '{}' does not match the x grid",
            c.name
        )));
    }
    let (x_lo, x_hi) = padded_x(data_range(plot.x.iter().copied()).ok_or_else(|| PlotError::Empty("x grid".into()))?);
    let (y_lo, y_hi) = match plot.y_range {
        Some(r) => r,
        None => padded(
            data_range(plot.curves.iter().flat_map(|c| c.values.iter().copied()))
                .ok_or_else(|| PlotError::Empty("no finite values".into()))?,
        ),
    };

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&plot.title)
    );

    // axes
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for t in ticks(x_lo, x_hi) {
        let x = sx(t);
        let y0 = TOP + plot_h;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            y0 + 18.0,
            tick_label(t)
        );
    }
    for t in ticks(y_lo, y_hi) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/>"#,
            LEFT - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(&plot.x_label)
    );

    // curves, clipped to the plot area
    let _ = writeln!(
        s,
        r#"<clipPath id="plot-area"><rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}"/></clipPath>"#
    );
    for (i, curve) in plot.curves.iter().enumerate() {
        let points: Vec<String> = plot
            .x
            .iter()
            .zip(&curve.values)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash = match DASHES[(i / PALETTE.len()) % DASHES.len()] {
            "" => String::new(),
            d => format!(r#" stroke-dasharray="{d}""#),
        };
        let _ = writeln!(
            s,
            r#"<polyline clip-path="url(#plot-area)" fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            points.join(" ")
        );
    }

    // legend
    let lx = WIDTH - RIGHT + 15.0;
    for (i, curve) in plot.curves.iter().enumerate() {
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/>"#,
            lx + 25.0,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 32.0,
            ly + 4.0,
            escape(&curve.name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn padded_x((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Renders `plot` and writes it to `path` atomically. Nothing is written when
/// rendering fails.
pub fn render_plot(plot: &PlotData, path: &Path) -> Result<(), PlotError> {
    let svg = render_svg(plot)?;
    write_atomic(path, svg.as_bytes()).map_err(|source| PlotError::Io {
        path: path.display().to_string(),
        source,
    })
}
