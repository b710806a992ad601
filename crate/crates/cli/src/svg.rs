//! Self-contained SVG line plots.
//!
//! Plots are always rendered from a CSV table that has already been written,
//! so regenerating a plot from its CSV reproduces it byte for byte. Only what
//! the figures need is implemented: linear/log axes, multiple named series,
//! and a legend.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::table::Table;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const MARGIN_L: f64 = 78.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 42.0;
const MARGIN_B: f64 = 58.0;
const PALETTE: [&str; 6] = [
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    min: f64,
    max: f64,
    log: bool,
}

impl Axis {
    fn map(&self, v: f64, lo_px: f64, hi_px: f64) -> f64 {
        let (v, min, max) = if self.log {
            (v.log10(), self.min.log10(), self.max.log10())
        } else {
            (v, self.min, self.max)
        };
        let frac = (v - min) / (max - min);
        lo_px + frac * (hi_px - lo_px)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let lo = self.min.log10().floor() as i32;
            let hi = self.max.log10().ceil() as i32;
            (lo..=hi)
                .map(|e| 10f64.powi(e))
                .filter(|&t| t >= self.min / 1.001 && t <= self.max * 1.001)
                .collect()
        } else {
            let span = self.max - self.min;
            let step = nice_step(span / 6.0);
            let start = (self.min / step).ceil() as i64;
            let end = (self.max / step).floor() as i64;
            (start..=end).map(|i| i as f64 * step).collect()
        }
    }
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.abs().log10().floor());
    let unit = raw / mag;
    let nice = if unit < 1.5 {
        1.0
    } else if unit < 3.5 {
        2.0
    } else if unit < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        let e = v.log10().round() as i32;
        format!("1e{e}")
    } else if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 0.01 && v.abs() < 10000.0 {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

impl LinePlot {
    pub fn render(&self) -> Result<String> {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for s in &self.series {
            for &(x, y) in &s.points {
                if x.is_finite()
                    && y.is_finite()
                    && (!self.log_x || x > 0.0)
                    && (!self.log_y || y > 0.0)
                {
                    pts.push((x, y));
                }
            }
        }
        if pts.is_empty() {
            bail!("nothing to plot: no finite points");
        }
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if x_min == x_max {
            x_max = x_min + 1.0;
        }
        if y_min == y_max {
            y_max = y_min * 1.1 + 1e-30;
        }
        if !self.log_y {
            let pad = 0.05 * (y_max - y_min);
            y_min -= pad;
            y_max += pad;
        }
        let x_axis = Axis {
            min: x_min,
            max: x_max,
            log: self.log_x,
        };
        let y_axis = Axis {
            min: y_min,
            max: y_max,
            log: self.log_y,
        };
        let px = |x: f64| x_axis.map(x, MARGIN_L, WIDTH - MARGIN_R);
        let py = |y: f64| y_axis.map(y, HEIGHT - MARGIN_B, MARGIN_T);

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );

        // Grid and ticks.
        for t in x_axis.ticks() {
            let x = px(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd" stroke-width="1"/>"##,
                MARGIN_T,
                HEIGHT - MARGIN_B
            );
            let _ = writeln!(
                svg,
                r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
                HEIGHT - MARGIN_B + 16.0,
                tick_label(t, self.log_x)
            );
        }
        for t in y_axis.ticks() {
            let y = py(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd" stroke-width="1"/>"##,
                MARGIN_L,
                WIDTH - MARGIN_R
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="end" dominant-baseline="middle">{}</text>"#,
                MARGIN_L - 6.0,
                tick_label(t, self.log_y)
            );
        }
        // Axes.
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="1"/>"#,
            WIDTH - MARGIN_L - MARGIN_R,
            HEIGHT - MARGIN_T - MARGIN_B
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
            (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
            (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
            (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
            escape(&self.y_label)
        );

        // Series.
        for (si, s) in self.series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            let mut path = String::new();
            for &(x, y) in &s.points {
                if !x.is_finite()
                    || !y.is_finite()
                    || (self.log_y && y <= 0.0)
                    || (self.log_x && x <= 0.0)
                {
                    continue;
                }
                let cmd = if path.is_empty() { 'M' } else { 'L' };
                let _ = write!(path, "{cmd}{:.2} {:.2} ", px(x), py(y));
            }
            if !path.is_empty() {
                let _ = writeln!(
                    svg,
                    r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
                    path.trim_end()
                );
            }
        }

        // Legend.
        for (si, s) in self.series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            let y = MARGIN_T + 16.0 + 18.0 * si as f64;
            let x = WIDTH - MARGIN_R - 190.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/>"#,
                x + 26.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" dominant-baseline="middle">{}</text>"#,
                x + 32.0,
                y,
                escape(&s.name)
            );
        }
        let _ = writeln!(svg, "</svg>");
        Ok(svg)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Build a plot from a written CSV: `x_col` on the x axis, one series per
/// distinct value of `group_col` (or a single series when `group_col` is
/// None), y values from `y_col`.
pub fn plot_from_csv(
    csv_path: &Path,
    x_col: &str,
    y_col: &str,
    group_col: Option<&str>,
    plot: LinePlot,
) -> Result<LinePlot> {
    let table = Table::read(csv_path)?;
    let xi = table.column_index(x_col)?;
    let yi = table.column_index(y_col)?;
    let mut out = plot;
    match group_col {
        None => {
            let mut points = Vec::new();
            for row in &table.rows {
                if let (Ok(x), Ok(y)) = (row[xi].parse::<f64>(), row[yi].parse::<f64>()) {
                    points.push((x, y));
                }
            }
            out.series.push(Series {
                name: y_col.to_string(),
                points,
            });
        }
        Some(g) => {
            let gi = table.column_index(g)?;
            let mut groups: Vec<String> = Vec::new();
            for row in &table.rows {
                if !groups.contains(&row[gi]) {
                    groups.push(row[gi].clone());
                }
            }
            for name in groups {
                let points: Vec<(f64, f64)> = table
                    .rows
                    .iter()
                    .filter(|r| r[gi] == name)
                    .filter_map(|r| match (r[xi].parse::<f64>(), r[yi].parse::<f64>()) {
                        (Ok(x), Ok(y)) => Some((x, y)),
                        _ => None,
                    })
                    .collect();
                out.series.push(Series {
                    name: format!("{g}={name}"),
                    points,
                });
            }
        }
    }
    Ok(out)
}

/// Render a plot built from a CSV and write it next to the data.
pub fn write_plot(
    csv_path: &Path,
    svg_path: &Path,
    x_col: &str,
    y_col: &str,
    group_col: Option<&str>,
    plot: LinePlot,
) -> Result<()> {
    let plot = plot_from_csv(csv_path, x_col, y_col, group_col, plot)?;
    std::fs::write(svg_path, plot.render()?)
        .with_context(|| format!("writing {}", svg_path.display()))
}
