//! Batch export of figure data for the worked examples: graphs of the
//! profile families per case, streamlines, and the transition layer.
//!
//! Every figure is an independent job; jobs run on the rayon pool and
//! return their files in memory, which are then written in a fixed order.
//! The output only depends on the inputs.

use std::path::Path;

use homsol::classify::{extremal_profiles, gamma_bounds};
use homsol::closedform::critical_profile;
use homsol::params::Endpoint;
use homsol::riccati::{anchored_profile, integrate_ivp, RiccatiTol, SolveRequest};
use homsol::viscosity::interior_limit_sweep;
use homsol::{FlowParams64, Profile64};
use rayon::prelude::*;
use serde_json::json;

use crate::commands::{class_name, fmt, viscous_leaf};
use crate::render::{self, csv_table, Format, Payload, RenderKind, RenderSpec, View};
use crate::stream::{self, AngularProfile, MeridionalBox};
use crate::CliError;

/// Bound on the tangency defect of every emitted polyline.
pub const TANGENCY_BOUND: f64 = 1e-4;

pub struct FigureFile {
    pub name: String,
    pub contents: String,
    /// Largest tangency defect, for streamline plots.
    pub defect: Option<f64>,
}

pub struct Manifest {
    pub files: Vec<FigureFile>,
    pub max_defect: f64,
}

const VIEW: View = View {
    y_range: (-0.9999, 0.9999),
    samples: 401,
};

/// Coefficients with `P_c = 2 (y - 2/3)^2`, whose interior leaves develop
/// a transition layer at the equator.
pub const LAYER_C: (f64, f64, f64) = (25.0 / 9.0, 1.0 / 9.0, -2.0);
const LAYER_NUS: [f64; 4] = [1.0, 1.0 / 8.0, 1.0 / 20.0, 1.0 / 50.0];

fn p1(c: (f64, f64, f64)) -> Result<FlowParams64, CliError> {
    Ok(FlowParams64::new(1.0, c.0, c.1, c.2)?)
}

fn spec(kind: RenderKind, format: Format) -> RenderSpec {
    RenderSpec {
        kind,
        target: "unused".into(),
        format,
        view: VIEW,
    }
}

fn table(name: &str, curves: &[(String, Profile64)]) -> Result<FigureFile, CliError> {
    Ok(FigureFile {
        name: name.into(),
        contents: render::render_string(
            &spec(RenderKind::ProfileFamily, Format::Csv),
            &Payload::Profiles(curves),
        )?,
        defect: None,
    })
}

fn svg(name: &str, src: &AngularProfile) -> Result<FigureFile, CliError> {
    let s = stream::streamlines(src, MeridionalBox::default(), None, 16)?;
    Ok(FigureFile {
        name: name.into(),
        contents: render::render_string(
            &spec(RenderKind::Streamlines, Format::Svg),
            &Payload::Streamlines(&s),
        )?,
        defect: Some(s.max_defect),
    })
}

fn ivp(p: FlowParams64, ybar: f64, g: f64) -> Result<Profile64, CliError> {
    Ok(integrate_ivp(&SolveRequest::new(p, ybar, g))?.0)
}

/// Lower solution, interior leaves, upper solution, then one local
/// solution beyond each bound.
fn global_and_local(
    c: (f64, f64, f64),
    interior: usize,
) -> Result<Vec<(String, Profile64)>, CliError> {
    let p = p1(c)?;
    let g = gamma_bounds(&p, 1e-7)?;
    let (up, lo) = extremal_profiles(&p)?;
    let mut out = vec![("lower".to_string(), lo)];
    for k in 1..=interior {
        let gk = g.gamma_minus + g.width() * k as f64 / (interior + 1) as f64;
        out.push((
            format!("g={}", fmt((gk * 1e4).round() / 1e4)),
            ivp(p, 0.0, gk)?,
        ));
    }
    out.push(("upper".to_string(), up));
    for gk in [g.gamma_minus - 1.0, g.gamma_plus + 1.0] {
        let gk = (gk * 1e4).round() / 1e4;
        out.push((format!("local g={}", fmt(gk)), ivp(p, 0.0, gk)?));
    }
    Ok(out)
}

fn parameter_set() -> Result<Vec<FigureFile>, CliError> {
    // (tau, sigma) with tau <= 2 nu, sigma < nu - tau / 4, or tau > 2 nu, sigma = tau / 4
    let nu = 1.0;
    let header: Vec<String> = ["tau", "sigma_bound", "sigma_ray"]
        .map(String::from)
        .to_vec();
    let rows: Vec<Vec<Option<f64>>> = (0..=240)
        .map(|k| {
            let t = -6.0 + 12.0 * k as f64 / 240.0;
            vec![
                Some(t),
                (t <= 2.0 * nu).then_some(nu - t / 4.0),
                (t >= 2.0 * nu).then_some(t / 4.0),
            ]
        })
        .collect();
    Ok(vec![FigureFile {
        name: "parameter_set.csv".into(),
        contents: csv_table(&header, &rows),
        defect: None,
    }])
}

fn case1_graphs() -> Result<Vec<FigureFile>, CliError> {
    Ok(vec![table(
        "case1_graphs.csv",
        &global_and_local((0.0, 0.0, 0.5), 5)?,
    )?])
}

fn case1_fields() -> Result<Vec<FigureFile>, CliError> {
    let p = p1((0.0, 0.0, 0.5))?;
    let (up, lo) = extremal_profiles(&p)?;
    let curves = vec![
        ("lower".to_string(), lo),
        ("g=-1".to_string(), ivp(p, 0.0, -1.0)?),
        ("g=0".to_string(), ivp(p, 0.0, 0.0)?),
        ("g=1".to_string(), ivp(p, 0.0, 1.0)?),
        ("upper".to_string(), up),
        ("local g=3".to_string(), ivp(p, 0.0, 3.0)?),
        ("local g=-3".to_string(), ivp(p, 0.0, -3.0)?),
    ];
    let mut header = vec!["theta".to_string()];
    for (l, _) in &curves {
        for q in ["u_theta", "u_r", "U_theta", "U_r"] {
            header.push(format!("{q}[{l}]"));
        }
    }
    let rows: Vec<Vec<Option<f64>>> = (1..400)
        .map(|k| {
            let th = std::f64::consts::PI * k as f64 / 400.0;
            let (s, y) = (th.sin(), th.cos());
            let mut r = vec![Some(th)];
            for (_, pr) in &curves {
                match pr.eval_with_slopes(&pr.slopes(), y) {
                    Some((u, du)) => r.extend([Some(u / s), Some(du), Some(u), Some(du * s)]),
                    None => r.extend([None; 4]),
                }
            }
            r
        })
        .collect();
    let mut files = vec![FigureFile {
        name: "case1_fields.csv".into(),
        contents: csv_table(&header, &rows),
        defect: None,
    }];
    for (l, pr) in &curves {
        let tag = l.replace("local ", "local_").replace("g=", "g");
        files.push(svg(
            &format!("case1_streamlines_{tag}.svg"),
            &AngularProfile::from_profile(pr),
        )?);
    }
    Ok(files)
}

fn case2_case3() -> Result<Vec<FigureFile>, CliError> {
    Ok(vec![
        table("case2_graphs.csv", &global_and_local((-1.0, 8.0, -1.5), 3)?)?,
        table("case3_graphs.csv", &global_and_local((8.0, -1.0, -1.5), 3)?)?,
    ])
}

fn case4() -> Result<Vec<FigureFile>, CliError> {
    Ok(vec![table(
        "case4_graphs.csv",
        &global_and_local((-1.0, -1.0, 0.5), 3)?,
    )?])
}

fn case5() -> Result<Vec<FigureFile>, CliError> {
    let mut files = Vec::new();
    for (tag, (c1, c2)) in [
        ("a", (0.0, 0.0)),
        ("b", (-1.0, 8.0)),
        ("c", (8.0, -1.0)),
        ("d", (-1.0, -1.0)),
    ] {
        let c3 = homsol::params::bar_c3(c1, c2, 1.0)?;
        let p = p1((c1, c2, c3))?;
        let star = critical_profile(1.0, c1, c2)?;
        let g0 = star.eval(0.0).unwrap_or(0.0);
        let mut curves = vec![("U_star".to_string(), star)];
        for d in [-3.0, -1.0, 1.0, 3.0] {
            curves.push((format!("local g={}", fmt(g0 + d)), ivp(p, 0.0, g0 + d)?));
        }
        files.push(table(&format!("case5{tag}_graphs.csv"), &curves)?);
    }
    Ok(files)
}

fn case6() -> Result<Vec<FigureFile>, CliError> {
    let mut files = Vec::new();
    let cases = [
        ("a", (0.0, 0.0, -12.0)),
        ("b", (-1.0, 8.0, -17.5)),
        ("c", (8.0, -1.0, -17.5)),
        ("d", (-1.0, -1.0, -1.5)),
    ];
    for (tag, c) in cases {
        let p = p1(c)?;
        let rt = RiccatiTol::default();
        let mut curves = Vec::new();
        // the solutions with the largest domains among A1 and A2
        if let Ok(u) = anchored_profile(&p, Endpoint::Minus1, &rt, None) {
            curves.push(("upper".to_string(), u));
        }
        if let Ok(l) = anchored_profile(&p, Endpoint::Plus1, &rt, None) {
            curves.push(("lower".to_string(), l));
        }
        for yb in [-0.5, 0.0, 0.5] {
            for g in [-4.0, 0.0, 4.0] {
                let (pr, cl) = integrate_ivp(&SolveRequest::new(p, yb, g))?;
                curves.push((
                    format!("yb={} g={} {}", fmt(yb), fmt(g), class_name(cl.class)),
                    pr,
                ));
            }
        }
        files.push(table(&format!("case6{tag}_graphs.csv"), &curves)?);
    }
    Ok(files)
}

fn layer_graphs() -> Result<Vec<FigureFile>, CliError> {
    let leaves: Vec<Profile64> = LAYER_NUS
        .iter()
        .map(|&nu| viscous_leaf(LAYER_C, nu, std::f64::consts::FRAC_PI_2))
        .collect::<Result<_, _>>()?;
    let p = p1(LAYER_C)?;
    let mut header = vec!["y".to_string()];
    header.extend(
        LAYER_NUS
            .iter()
            .map(|nu| format!("U[nu=1/{}]", fmt(1.0 / nu))),
    );
    header.extend(["V_plus".to_string(), "V_minus".to_string()]);
    let rows: Vec<Vec<Option<f64>>> = (0..VIEW.samples)
        .map(|k| {
            let (a, b) = VIEW.y_range;
            let y = a + (b - a) * k as f64 / (VIEW.samples - 1) as f64;
            let v = (2.0 * p.p_c(y)).sqrt();
            let mut r = vec![Some(y)];
            r.extend(leaves.iter().map(|l| l.eval(y)));
            r.extend([Some(v), Some(-v)]);
            r
        })
        .collect();
    let nus = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let sweep = interior_limit_sweep(LAYER_C, std::f64::consts::FRAC_PI_2, &nus, 0.1)?;
    Ok(vec![
        FigureFile {
            name: "layer_graphs.csv".into(),
            contents: csv_table(&header, &rows),
            defect: None,
        },
        FigureFile {
            name: "layer_sweep.json".into(),
            contents: render::render_string(
                &spec(RenderKind::Sweep, Format::Json),
                &Payload::Sweep(&sweep),
            )?,
            defect: None,
        },
    ])
}

fn layer_streamlines() -> Result<Vec<FigureFile>, CliError> {
    LAYER_NUS
        .par_iter()
        .map(|&nu| {
            let leaf = viscous_leaf(LAYER_C, nu, std::f64::consts::FRAC_PI_2)?;
            svg(
                &format!("layer_streamlines_nu_1_{}.svg", fmt(1.0 / nu)),
                &AngularProfile::from_profile(&leaf),
            )
        })
        .collect()
}

fn euler_streamlines() -> Result<Vec<FigureFile>, CliError> {
    let p = p1(LAYER_C)?;
    Ok(vec![
        svg(
            "euler_streamlines_v_plus.svg",
            &AngularProfile::euler(p, 1.0)?,
        )?,
        svg(
            "euler_streamlines_v_minus.svg",
            &AngularProfile::euler(p, -1.0)?,
        )?,
    ])
}

type Job = fn() -> Result<Vec<FigureFile>, CliError>;

const JOBS: [Job; 10] = [
    parameter_set,
    case1_graphs,
    case1_fields,
    case2_case3,
    case4,
    case5,
    case6,
    layer_graphs,
    layer_streamlines,
    euler_streamlines,
];

/// All figure files, in job order, without touching the file system.
pub fn build_all() -> Result<Manifest, CliError> {
    let parts: Vec<Vec<FigureFile>> = JOBS.par_iter().map(|j| j()).collect::<Result<_, _>>()?;
    let mut files: Vec<FigureFile> = parts.into_iter().flatten().collect();
    let max_defect = files.iter().filter_map(|f| f.defect).fold(0.0, f64::max);
    let index: Vec<serde_json::Value> = files
        .iter()
        .map(|f| json!({ "name": f.name, "bytes": f.contents.len(), "max_tangency_defect": f.defect }))
        .collect();
    let manifest = json!({ "files": index, "max_tangency_defect": max_defect, "tangency_bound": TANGENCY_BOUND });
    files.push(FigureFile {
        name: "manifest.json".into(),
        contents: serde_json::to_string_pretty(&manifest).expect("json") + "\n",
        defect: None,
    });
    Ok(Manifest { files, max_defect })
}

/// Writes every figure file under `dir`. Fails if any streamline plot
/// exceeds [`TANGENCY_BOUND`], after writing the files.
pub fn write_all(dir: &Path) -> Result<Manifest, CliError> {
    let m = build_all()?;
    std::fs::create_dir_all(dir)?;
    for f in &m.files {
        std::fs::write(dir.join(&f.name), &f.contents)?;
    }
    if let Some(bad) = m
        .files
        .iter()
        .find(|f| f.defect.is_some_and(|d| d > TANGENCY_BOUND))
    {
        return Err(CliError::Internal(format!(
            "{}: tangency defect {} above {}",
            bad.name,
            fmt(bad.defect.unwrap()),
            fmt(TANGENCY_BOUND)
        )));
    }
    Ok(m)
}
