//! Scatter/line plots as SVG text, each with a sidecar CSV of the plotted data.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// One plotted point; `series` names the layer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotPoint {
    pub series: String,
    pub x: f64,
    pub y: f64,
}

/// How a layer is drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Style {
    Dots(&'static str),
    Line(&'static str),
}

const SIZE: f64 = 600.0;
const PAD: f64 = 40.0;

fn num(x: f64) -> String {
    format!("{x:.3}")
}

/// Renders `layers` in a square frame with equal axis scales.
pub fn render(title: &str, layers: &[(&str, Style)], points: &[PlotPoint]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let k = (SIZE - 2.0 * PAD) / span;
    let px = |x: f64| SIZE / 2.0 + (x - cx) * k;
    let py = |y: f64| SIZE / 2.0 - (y - cy) * k;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(s, "<text x=\"{PAD}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>");
    if (y0..=y1).contains(&0.0) {
        let _ = writeln!(s, "<line x1=\"0\" y1=\"{0}\" x2=\"{SIZE}\" y2=\"{0}\" stroke=\"#ccc\"/>", num(py(0.0)));
    }
    if (x0..=x1).contains(&0.0) {
        let _ = writeln!(s, "<line x1=\"{0}\" y1=\"0\" x2=\"{0}\" y2=\"{SIZE}\" stroke=\"#ccc\"/>", num(px(0.0)));
    }
    for (name, style) in layers {
        let pts: Vec<&PlotPoint> = points.iter().filter(|p| p.series == *name).collect();
        match style {
            Style::Line(color) => {
                let path: Vec<String> = pts.iter().map(|p| format!("{},{}", num(px(p.x)), num(py(p.y)))).collect();
                let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" points=\"{}\"/>", path.join(" "));
            }
            Style::Dots(color) => {
                for p in pts {
                    let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"{color}\"/>", num(px(p.x)), num(py(p.y)));
                }
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `stem.svg` and `stem.csv` holding exactly `points`.
pub fn write_plot(dir: &Path, stem: &str, title: &str, layers: &[(&str, Style)], points: &[PlotPoint]) -> Result<(), CliError> {
    std::fs::write(dir.join(format!("{stem}.svg")), render(title, layers, points))?;
    let f = std::fs::File::create(dir.join(format!("{stem}.csv")))?;
    szego::harness::write_csv(points, f)?;
    Ok(())
}
