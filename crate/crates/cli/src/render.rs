//! CSV, JSON and SVG emission.

use std::path::PathBuf;

use homsol::viscosity::{RateFit, SweepReport};
use homsol::Profile64;
use serde_json::{json, Value};

use crate::stream::Streamlines;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderKind {
    ProfileFamily,
    Streamlines,
    Sweep,
    LiouvilleField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct View {
    /// Ordinate range of profile tables.
    pub y_range: (f64, f64),
    /// Rows of profile tables.
    pub samples: usize,
}

impl Default for View {
    fn default() -> Self {
        Self {
            y_range: (-0.999, 0.999),
            samples: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub kind: RenderKind,
    pub target: PathBuf,
    pub format: Format,
    pub view: View,
}

/// Samples of a Liouville field on a chart grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleSamples {
    pub label: String,
    pub residual: f64,
    pub residual_fd: f64,
    pub meridian_variance: f64,
    /// `gamma` of the Landau profile for linear `f`.
    pub landau_gamma: Option<f64>,
    /// `(theta, phi, u_r, u_theta, u_phi)`.
    pub rows: Vec<[f64; 5]>,
}

pub enum Payload<'a> {
    Profiles(&'a [(String, Profile64)]),
    Streamlines(&'a Streamlines),
    Sweep(&'a SweepReport<f64>),
    Liouville(&'a LiouvilleSamples),
}

impl RenderSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.view.samples < 16 {
            return Err(CliError::Usage("sample count must be at least 16".into()));
        }
        let (a, b) = self.view.y_range;
        if !(a.is_finite() && b.is_finite() && a < b && a >= -1.0 && b <= 1.0) {
            return Err(CliError::Usage(
                "y-range must be an increasing sub-interval of [-1, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// File contents for `payload`.
pub fn render_string(spec: &RenderSpec, payload: &Payload) -> Result<String, CliError> {
    spec.validate()?;
    let mismatch = || CliError::SpecMismatch(format!("{:?} as {:?}", spec.kind, spec.format));
    match (spec.kind, spec.format, payload) {
        (RenderKind::ProfileFamily, Format::Csv, Payload::Profiles(p)) => {
            Ok(profiles_csv(p, &spec.view))
        }
        (RenderKind::ProfileFamily, Format::Json, Payload::Profiles(p)) => {
            Ok(to_json(&profiles_json(p, &spec.view)))
        }
        (RenderKind::Streamlines, Format::Svg, Payload::Streamlines(s)) => Ok(streamlines_svg(s)),
        (RenderKind::Streamlines, Format::Json, Payload::Streamlines(s)) => {
            Ok(to_json(&streamlines_json(s)))
        }
        (RenderKind::Sweep, Format::Json, Payload::Sweep(r)) => Ok(to_json(&sweep_json(r))),
        (RenderKind::Sweep, Format::Csv, Payload::Sweep(r)) => Ok(sweep_csv(r)),
        (RenderKind::LiouvilleField, Format::Csv, Payload::Liouville(l)) => Ok(liouville_csv(l)),
        (RenderKind::LiouvilleField, Format::Json, Payload::Liouville(l)) => {
            Ok(to_json(&liouville_json(l)))
        }
        _ => Err(mismatch()),
    }
}

pub fn render(spec: &RenderSpec, payload: &Payload) -> Result<(), CliError> {
    let s = render_string(spec, payload)?;
    if let Some(dir) = spec.target.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&spec.target, s)?;
    Ok(())
}

/// Twelve significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

fn cell(v: Option<f64>) -> String {
    v.filter(|v| v.is_finite()).map(num).unwrap_or_default()
}

/// Table with a header row; missing values become empty cells.
pub fn csv_table(header: &[String], rows: &[Vec<Option<f64>>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.iter().map(|v| cell(*v)).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    s
}

/// Inverse of [`csv_table`].
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>), CliError> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| CliError::Usage("empty table".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for l in lines {
        let r: Result<Vec<Option<f64>>, _> = l
            .split(',')
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    c.parse::<f64>().map(Some)
                }
            })
            .collect();
        let r = r.map_err(|e| CliError::Usage(format!("bad number: {e}")))?;
        if r.len() != header.len() {
            return Err(CliError::Usage("ragged table".into()));
        }
        rows.push(r);
    }
    Ok((header, rows))
}

fn y_grid(view: &View) -> Vec<f64> {
    let (a, b) = view.y_range;
    (0..view.samples)
        .map(|k| a + (b - a) * k as f64 / (view.samples - 1) as f64)
        .collect()
}

fn profiles_csv(p: &[(String, Profile64)], view: &View) -> String {
    let mut header = vec!["y".to_string()];
    header.extend(p.iter().map(|(l, _)| l.clone()));
    let rows: Vec<Vec<Option<f64>>> = y_grid(view)
        .into_iter()
        .map(|y| {
            std::iter::once(Some(y))
                .chain(p.iter().map(|(_, pr)| pr.eval(y)))
                .collect()
        })
        .collect();
    csv_table(&header, &rows)
}

/// The profile's own nodes with `U` and `U'`.
pub fn samples_csv(p: &Profile64) -> String {
    let header: Vec<String> = ["y", "U", "dU"].map(String::from).to_vec();
    let du = p.slopes();
    let rows: Vec<Vec<Option<f64>>> = (0..p.len())
        .map(|i| vec![Some(p.y[i]), Some(p.u[i]), Some(du[i])])
        .collect();
    csv_table(&header, &rows)
}

pub fn samples_json(p: &Profile64) -> String {
    to_json(&json!({
        "params": { "nu": p.params.nu, "c": [p.params.c1, p.params.c2, p.params.c3] },
        "domain": [p.domain.y0(), p.domain.y1()],
        "y": p.y,
        "u": p.u,
        "du": p.slopes(),
    }))
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn profiles_json(p: &[(String, Profile64)], view: &View) -> Value {
    let y = y_grid(view);
    let curves: Vec<Value> = p
        .iter()
        .map(|(l, pr)| {
            json!({
                "label": l,
                "domain": [pr.domain.y0(), pr.domain.y1()],
                "u": y.iter().map(|&v| pr.eval(v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "y": y, "curves": curves })
}

fn fit_json(f: &Option<RateFit<f64>>) -> Value {
    match f {
        Some(f) => json!({ "exponent": f.exponent, "constant": f.constant }),
        None => Value::Null,
    }
}

pub fn sweep_json(r: &SweepReport<f64>) -> Value {
    let pts: Vec<Value> = r
        .points
        .iter()
        .map(|p| {
            json!({
                "nu": p.nu,
                "err_plus": p.err_plus,
                "err_minus": p.err_minus,
                "raw_err_plus": p.raw_err_plus,
                "raw_err_minus": p.raw_err_minus,
                "c1_err_plus": p.c1_err_plus,
                "c1_err_minus": p.c1_err_minus,
                "layer": p.layer.map(|l| json!({ "center": l.center, "width": l.width, "threshold": l.threshold })),
            })
        })
        .collect();
    json!({
        "c": [r.c.0, r.c.1, r.c.2],
        "epsilon": r.epsilon,
        "crossing": r.crossing,
        "corners": r.corners,
        "points": pts,
        "fit_plus": fit_json(&r.fit_plus),
        "fit_minus": fit_json(&r.fit_minus),
        "fit_sup": fit_json(&r.fit_sup),
        "errors_decrease": r.errors_decrease(1.2),
        "sup_errors_decrease": r.sup_errors_decrease(1.2),
        "widths_decrease": r.widths_decrease(),
    })
}

fn sweep_csv(r: &SweepReport<f64>) -> String {
    let header: Vec<String> = [
        "nu",
        "err_plus",
        "err_minus",
        "raw_err_plus",
        "raw_err_minus",
        "layer_center",
        "layer_width",
    ]
    .map(String::from)
    .to_vec();
    let rows: Vec<Vec<Option<f64>>> = r
        .points
        .iter()
        .map(|p| {
            vec![
                Some(p.nu),
                Some(p.err_plus),
                Some(p.err_minus),
                Some(p.raw_err_plus),
                Some(p.raw_err_minus),
                p.layer.map(|l| l.center),
                p.layer.map(|l| l.width),
            ]
        })
        .collect();
    csv_table(&header, &rows)
}

fn liouville_csv(l: &LiouvilleSamples) -> String {
    let header: Vec<String> = ["theta", "phi", "u_r", "u_theta", "u_phi"]
        .map(String::from)
        .to_vec();
    let rows: Vec<Vec<Option<f64>>> = l
        .rows
        .iter()
        .map(|r| r.iter().map(|v| Some(*v)).collect())
        .collect();
    csv_table(&header, &rows)
}

pub fn liouville_json(l: &LiouvilleSamples) -> Value {
    json!({
        "f": l.label,
        "residual": l.residual,
        "residual_fd": l.residual_fd,
        "meridian_variance": l.meridian_variance,
        "landau_gamma": l.landau_gamma,
        "samples": l.rows.len(),
    })
}

fn streamlines_json(s: &Streamlines) -> Value {
    let lines: Vec<Value> = s
        .lines
        .iter()
        .map(|(k, l)| json!({ "level": s.levels[*k], "points": l.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>() }))
        .collect();
    json!({
        "box": { "x1": [s.bbox.x1.0, s.bbox.x1.1], "x3": [s.bbox.x3.0, s.bbox.x3.1] },
        "levels": s.levels,
        "lines": lines,
        "max_tangency_defect": s.max_defect,
    })
}

const SVG_SIZE: f64 = 800.0;

fn streamlines_svg(s: &Streamlines) -> String {
    let b = s.bbox;
    let sx = SVG_SIZE / (b.x1.1 - b.x1.0);
    let sz = SVG_SIZE / (b.x3.1 - b.x3.0);
    let pt = |x1: f64, x3: f64| format!("{:.3},{:.3}", (x1 - b.x1.0) * sx, (b.x3.1 - x3) * sz);
    let poly = |class: &str, pts: &[(f64, f64)], extra: &str| {
        let stroke = match class {
            "streamline" => "stroke=\"#1f4e9c\"",
            "axis" => "stroke=\"#000000\"",
            _ => "stroke=\"#888888\" stroke-dasharray=\"4 3\"",
        };
        let p: Vec<String> = pts.iter().map(|&(a, c)| pt(a, c)).collect();
        format!(
            "<polyline class=\"{class}\" fill=\"none\" {stroke}{extra} points=\"{}\"/>\n",
            p.join(" ")
        )
    };
    let mut out =
        String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n");
    out.push_str(&poly("axis", &[(0.0, b.x3.0), (0.0, b.x3.1)], ""));
    out.push_str(&poly("axis", &[(b.x1.0, 0.0), (b.x1.1, 0.0)], ""));
    let circle: Vec<(f64, f64)> = (0..=256)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 256.0;
            (t.sin(), t.cos())
        })
        .collect();
    out.push_str(&poly("sphere-trace", &circle, ""));
    for (k, l) in &s.lines {
        out.push_str(&poly(
            "streamline",
            l,
            &format!(" data-level=\"{}\"", num(s.levels[*k])),
        ));
    }
    out.push_str("</svg>\n");
    out
}
