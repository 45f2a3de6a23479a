//! Flat bound tables and SVG sketches.

use std::fmt::Write as _;
use std::str::FromStr;

use planar_variation::engine::{exact_collinear, VariationEstimate};
use planar_variation::geom::{int, rat, Line, Point, PointList};
use planar_variation::variation_factor::PerturbedLine;
use planar_variation::{Complex64, FunctionTable};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::UnknownFormat(other.to_string())),
        }
    }
}

/// One row of a bound table. `reference` holds a closed-form value when the
/// row has one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: String,
    pub size: usize,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub lower_rule: String,
    pub upper_rule: String,
    pub reference: Option<f64>,
}

impl BoundRow {
    pub fn from_estimate(name: impl Into<String>, size: usize, e: &VariationEstimate) -> Self {
        Self {
            name: name.into(),
            size,
            lower: e.lower,
            upper: e.upper,
            exact: e.exact,
            lower_rule: format!("{:?}", e.lower_rule),
            upper_rule: format!("{:?}", e.upper_rule),
            reference: None,
        }
    }
}

/// What an SVG sketch shows: the points, a polyline through them and,
/// optionally, the line a variation factor was measured on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure {
    pub points: Vec<Point>,
    pub polyline: Option<PointList>,
    pub line: Option<Line>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub rows: Vec<BoundRow>,
    pub figure: Option<Figure>,
}

pub fn emit_report(results: &ResultSet, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(results)? + "\n"),
        Format::Csv => csv_table(&results.rows),
        Format::Svg => Ok(svg(results.figure.as_ref())),
    }
}

fn csv_table(rows: &[BoundRow]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Invalid(format!("csv: {e}"));
    w.write_record(["name", "size", "lower", "upper", "exact", "lower_rule", "upper_rule", "reference"])
        .map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `f(1/k) = (-1)^k / k` on `{1/k : 1 ≤ k ≤ m}`.
pub fn harmonic_table(m: usize) -> FunctionTable {
    let pairs = (1..=m as i64)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (Point::new(rat(1, k), int(0)), Complex64::new(sign / k as f64, 0.0))
        })
        .collect();
    FunctionTable::from_pairs(pairs).expect("distinct points, finite values")
}

/// Exact variations of the truncated alternating example for `m = 2..=max_m`,
/// with the closed-form partial sums as reference.
pub fn harmonic_sweep(max_m: usize) -> Vec<BoundRow> {
    (2..=max_m)
        .map(|m| {
            let v = exact_collinear(&harmonic_table(m)).expect("points lie on the real axis");
            let partial: f64 = (1..m).map(|k| 1.0 / k as f64 + 1.0 / (k + 1) as f64).sum();
            BoundRow {
                name: format!("harmonic-{m}"),
                size: m,
                lower: v,
                upper: v,
                exact: true,
                lower_rule: "Exact1D".into(),
                upper_rule: "Exact1D".into(),
                reference: Some(partial),
            }
        })
        .collect()
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn new(points: &[(f64, f64)]) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        if points.is_empty() {
            (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        // pad by a tenth so boundary points are not on the edge
        let pad = 0.1 * span;
        Self { min: (x0 - pad, y0 - pad), scale: (SIZE - 2.0 * MARGIN) / (span + 2.0 * pad) }
    }

    fn world(&self) -> (f64, f64, f64, f64) {
        let w = (SIZE - 2.0 * MARGIN) / self.scale;
        (self.min.0, self.min.1, self.min.0 + w, self.min.1 + w)
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.min.0) * self.scale, SIZE - MARGIN - (y - self.min.1) * self.scale)
    }
}

/// Clips `a x + b y + c = 0` to the frame's world box.
fn clip(line: &Line, frame: &Frame) -> Option<((f64, f64), (f64, f64))> {
    let (a, b, c) = (
        planar_variation::geom::to_f64(line.a()),
        planar_variation::geom::to_f64(line.b()),
        planar_variation::geom::to_f64(line.c()),
    );
    let (x0, y0, x1, y1) = frame.world();
    let mut hits = Vec::new();
    if b != 0.0 {
        for x in [x0, x1] {
            let y = -(a * x + c) / b;
            if (y0..=y1).contains(&y) {
                hits.push((x, y));
            }
        }
    }
    if a != 0.0 {
        for y in [y0, y1] {
            let x = -(b * y + c) / a;
            if (x0..=x1).contains(&x) {
                hits.push((x, y));
            }
        }
    }
    hits.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    hits.dedup();
    (hits.len() >= 2).then(|| (hits[0], hits[hits.len() - 1]))
}

fn svg(figure: Option<&Figure>) -> String {
    let pts: Vec<(f64, f64)> = figure.map(|f| f.points.iter().map(Point::to_f64).collect()).unwrap_or_default();
    let frame = Frame::new(&pts);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    if let Some(fig) = figure {
        if let Some(line) = &fig.line {
            if let Some((p, q)) = clip(line, &frame) {
                let (p, q) = (frame.map(p), frame.map(q));
                let _ = writeln!(
                    out,
                    r##"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#c0392b" stroke-dasharray="6 4"/>"##,
                    p.0, p.1, q.0, q.1
                );
            }
        }
        if let Some(list) = &fig.polyline {
            let coords: Vec<String> = list
                .iter()
                .map(|p| {
                    let (x, y) = frame.map(p.to_f64());
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(
                out,
                r##"  <polyline points="{}" fill="none" stroke="#2c3e50" stroke-width="1.5"/>"##,
                coords.join(" ")
            );
        }
        for p in &pts {
            let (x, y) = frame.map(*p);
            let _ = writeln!(out, r##"  <circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="#2980b9"/>"##);
        }
    }
    out.push_str("</svg>\n");
    out
}

/// The figure for a `vf` evaluation: the list's support, the list, and the
/// base of the measuring line.
pub fn vf_figure(list: &PointList, line: &PerturbedLine) -> Figure {
    Figure { points: list.support().points().to_vec(), polyline: Some(list.clone()), line: Some(line.base().clone()) }
}
