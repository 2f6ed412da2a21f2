//! Subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use homsol::classify::{
    asymptotic_indicators, extremal_profiles, foliation, gamma_bounds, singularity_type, SingKind,
};
use homsol::closedform::critical_profile;
use homsol::liouville::{
    landau_for_linear, liouville_residual, liouville_residual_fd, liouville_velocity,
    meridian_variance, ChartGrid, MeromorphicSpec,
};
use homsol::params::Endpoint;
use homsol::profile::{standard_grid, EndState};
use homsol::riccati::{
    boundary_limit, hypergeom_rep, integrate_ivp, linear_rep, ClassKind, SolveRequest,
};
use homsol::viscosity::{extremal_limit_sweep, interior_limit_sweep, LAYER_GRID_INTERIOR};
use homsol::{Error, FlowParams64, Profile64};
use num_complex::Complex;

use crate::render::{self, Format, LiouvilleSamples, Payload, RenderKind, RenderSpec, View};
use crate::stream::{self, AngularProfile, MeridionalBox};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "homsol",
    version,
    about = "(-1)-homogeneous axisymmetric no-swirl Navier-Stokes solutions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Coeffs {
    /// Viscosity.
    #[arg(long, default_value = "1", value_parser = parse_num)]
    pub nu: f64,
    /// `c1,c2,c3`; fractions such as `25/9` are accepted.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
    pub c: (f64, f64, f64),
}

impl Coeffs {
    pub fn params(&self) -> Result<FlowParams64, CliError> {
        Ok(FlowParams64::new(self.nu, self.c.0, self.c.1, self.c.2)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rep {
    Ivp,
    Linear,
    Hyper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Interior,
    Extremal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FKind {
    Linear,
    Power,
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameter case, gamma interval, endpoint values and singularity types.
    #[command(args_override_self = true)]
    Classify {
        #[command(flatten)]
        coeffs: Coeffs,
        /// Bisection tolerance for the gamma bounds.
        #[arg(long, default_value = "1e-7", value_parser = parse_num)]
        tol: f64,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// One initial-value problem U(ybar) = gamma.
    #[command(args_override_self = true)]
    Solve {
        #[command(flatten)]
        coeffs: Coeffs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
        gamma: f64,
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_num)]
        ybar: f64,
        #[arg(long, value_enum, default_value = "ivp")]
        rep: Rep,
        /// Profile samples (`.csv` or `.json`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Global solutions between the lower and upper solution.
    #[command(args_override_self = true)]
    Family {
        #[command(flatten)]
        coeffs: Coeffs,
        #[arg(long, default_value = "7")]
        leaves: usize,
        #[arg(long, default_value = "201")]
        samples: usize,
        /// Table of the leaves (`.csv` or `.json`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The linear profile on the critical surface c3 = bar_c3.
    #[command(args_override_self = true)]
    Critical {
        #[arg(long, default_value = "1", value_parser = parse_num)]
        nu: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
        c1: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_num)]
        c2: f64,
        #[arg(long, default_value = "201")]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vanishing-viscosity sweep against the Euler branches.
    #[command(args_override_self = true)]
    Limit {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        c: (f64, f64, f64),
        /// Comma-separated viscosities.
        #[arg(long, default_value = "1/8,1/16,1/32,1/64", value_parser = parse_list)]
        nus: NumList,
        #[arg(long, value_enum, default_value = "interior")]
        mode: SweepMode,
        /// Polar angle of the zero crossing (interior mode).
        #[arg(long, default_value = "1.5707963267948966", value_parser = parse_num)]
        theta0: f64,
        /// Half-width excluded around the crossing and around corners.
        #[arg(long, default_value = "0.1", value_parser = parse_num)]
        eps: f64,
        /// Report (`.json` or `.csv`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Liouville-formula field of a meromorphic function on the sphere.
    #[command(args_override_self = true)]
    Liouville {
        #[arg(long, value_enum)]
        f: FKind,
        /// Complex factor `re,im`.
        #[arg(long, default_value = "1,0", allow_hyphen_values = true, value_parser = parse_complex)]
        a: Complex<f64>,
        /// Exponent for `power`.
        #[arg(long, default_value = "2", value_parser = parse_num)]
        alpha: f64,
        /// Rate `re,im` for `exp`.
        #[arg(long, default_value = "0.3,0", allow_hyphen_values = true, value_parser = parse_complex)]
        b: Complex<f64>,
        /// Chart grid size per direction.
        #[arg(long, default_value = "64")]
        grid: usize,
        /// Polar margin of the grid.
        #[arg(long, default_value = "0.1", value_parser = parse_num)]
        margin: f64,
        /// Field samples (`.csv` or `.json`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stream-function contours in the meridional plane.
    #[command(args_override_self = true)]
    Streamlines {
        #[command(flatten)]
        coeffs: Coeffs,
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_num)]
        gamma: f64,
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_num)]
        ybar: f64,
        /// Draw an Euler branch `+-sqrt(2 P_c)` instead of a solve.
        #[arg(long, value_enum)]
        euler: Option<Branch>,
        /// Use the fine grid needed for thin transition layers.
        #[arg(long)]
        fine: bool,
        /// `x1min,x1max,x3min,x3max`.
        #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true, value_parser = parse_list)]
        r#box: NumList,
        /// Grid nodes per side.
        #[arg(long, default_value = "201")]
        n: usize,
        #[arg(long, default_value = "16")]
        levels: usize,
        /// Output (`.svg` or `.json`).
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate the full set of figure data files.
    #[command(args_override_self = true)]
    Figures {
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

/// A decimal number or a fraction `p/q`.
pub fn parse_num(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            let q: f64 = q.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            p / q
        }
        None => s.parse().map_err(|e| format!("`{s}`: {e}"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

pub fn parse_list(s: &str) -> Result<NumList, String> {
    s.split(',')
        .map(parse_num)
        .collect::<Result<Vec<_>, _>>()
        .map(NumList)
}

fn parse_triple(s: &str) -> Result<(f64, f64, f64), String> {
    match parse_list(s)?.0[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("`{s}`: expected three comma-separated numbers")),
    }
}

fn parse_complex(s: &str) -> Result<Complex<f64>, String> {
    match parse_list(s)?.0[..] {
        [re] => Ok(Complex::new(re, 0.0)),
        [re, im] => Ok(Complex::new(re, im)),
        _ => Err(format!("`{s}`: expected `re` or `re,im`")),
    }
}

/// Compact decimal rendering for summaries.
pub fn fmt(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e8) {
        return format!("{v:.6e}");
    }
    let s = format!("{v:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn format_of(path: &Path) -> Result<Format, CliError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some("svg") => Ok(Format::Svg),
        _ => Err(CliError::Usage(format!(
            "{}: extension must be csv, json or svg",
            path.display()
        ))),
    }
}

fn emit(
    kind: RenderKind,
    path: &Path,
    view: View,
    payload: Payload,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let spec = RenderSpec {
        kind,
        target: path.to_path_buf(),
        format: format_of(path)?,
        view,
    };
    render::render(&spec, &payload)?;
    writeln!(out, "wrote: {}", path.display())?;
    Ok(())
}

pub fn class_name(c: ClassKind) -> &'static str {
    match c {
        ClassKind::Global => "Global",
        ClassKind::A1 => "A1",
        ClassKind::A2 => "A2",
        ClassKind::A3 => "A3",
    }
}

fn kind_name(k: SingKind) -> &'static str {
    match k {
        SingKind::Type1 => "Type1",
        SingKind::Type2 => "Type2",
        SingKind::Type3 => "Type3",
    }
}

/// Endpoint value and singularity type at one pole, as display strings.
fn pole_summary(p: &Profile64, end: Endpoint) -> (String, String) {
    let v = match boundary_limit(p, end) {
        Ok(b) => fmt(b.value),
        Err(e) => format!("({e})"),
    };
    let t = match singularity_type(p, end, p.params.nu) {
        Ok(s) => kind_name(s.kind).to_string(),
        Err(Error::Inconclusive(_)) => "Inconclusive".into(),
        Err(e) => format!("({e})"),
    };
    (v, t)
}

fn leaf_json(p: &Profile64) -> serde_json::Value {
    let (a, ta) = pole_summary(p, Endpoint::Minus1);
    let (b, tb) = pole_summary(p, Endpoint::Plus1);
    let eta = |e| {
        asymptotic_indicators(p, e, p.params.nu)
            .ok()
            .and_then(|i| i.eta)
    };
    serde_json::json!({
        "u0": p.eval(0.0),
        "u_minus1": a, "type_minus1": ta, "eta_minus1": eta(Endpoint::Minus1),
        "u_plus1": b, "type_plus1": tb, "eta_plus1": eta(Endpoint::Plus1),
    })
}

fn classify(coeffs: &Coeffs, tol: f64, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let p = coeffs.params()?;
    let case = p.classify_case();
    let ts = p.tau_values()?;
    let g = gamma_bounds(&p, tol)?;
    let (up, lo) = extremal_profiles(&p)?;
    let mid = 0.5 * (g.gamma_minus + g.gamma_plus);
    let interior = if g.width() > 100.0 * tol {
        Some(integrate_ivp(&SolveRequest::new(p, 0.0, mid))?.0)
    } else {
        None
    };
    let report = serde_json::json!({
        "case": case.to_string(),
        "nu": p.nu,
        "c": [p.c1, p.c2, p.c3],
        "bar_c3": p.bar_c3()?,
        "tau": { "tau1": ts.tau1, "tau2": ts.tau2, "tau1p": ts.tau1p, "tau2p": ts.tau2p },
        "gamma_minus": g.gamma_minus,
        "gamma_plus": g.gamma_plus,
        "upper": leaf_json(&up),
        "lower": leaf_json(&lo),
        "interior": interior.as_ref().map(|i| {
            let mut v = leaf_json(i);
            v["gamma"] = mid.into();
            v
        }),
    });
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("json")
        )?;
        return Ok(());
    }
    writeln!(out, "case: {case}")?;
    writeln!(out, "bar_c3: {}", fmt(p.bar_c3()?))?;
    writeln!(
        out,
        "tau: tau1 = {}, tau2 = {}, tau1' = {}, tau2' = {}",
        fmt(ts.tau1),
        fmt(ts.tau2),
        fmt(ts.tau1p),
        fmt(ts.tau2p)
    )?;
    writeln!(out, "gamma_minus: {}", fmt(g.gamma_minus))?;
    writeln!(out, "gamma_plus: {}", fmt(g.gamma_plus))?;
    let line = |name: &str, p: &Profile64, out: &mut dyn Write| -> Result<(), CliError> {
        let (a, ta) = pole_summary(p, Endpoint::Minus1);
        let (b, tb) = pole_summary(p, Endpoint::Plus1);
        writeln!(out, "{name}: U(-1) = {a}, U(1) = {b}; types {ta} / {tb}")?;
        Ok(())
    };
    line("upper", &up, out)?;
    line("lower", &lo, out)?;
    if let Some(i) = &interior {
        line(&format!("interior (gamma = {})", fmt(mid)), i, out)?;
    }
    Ok(())
}

fn end_state(e: EndState<f64>) -> String {
    match e {
        EndState::Reaches => "reaches".into(),
        EndState::BlowUp(y) => format!("blow-up at {}", fmt(y)),
        EndState::Open(y) => format!("open at {}", fmt(y)),
    }
}

fn solve(
    coeffs: &Coeffs,
    gamma: f64,
    ybar: f64,
    rep: Rep,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let p = coeffs.params()?;
    let req = SolveRequest::new(p, ybar, gamma);
    let (ivp, class) = integrate_ivp(&req)?;
    let prof = match rep {
        Rep::Ivp => ivp,
        Rep::Linear => linear_rep(&req)?.1,
        Rep::Hyper => hypergeom_rep(&req)?,
    };
    writeln!(out, "case: {}", p.classify_case())?;
    writeln!(out, "class: {}", class_name(class.class))?;
    let pts: Vec<String> = class.blowup_points.iter().map(|v| fmt(*v)).collect();
    writeln!(out, "blowup_points: [{}]", pts.join(", "))?;
    writeln!(out, "left: {}", end_state(prof.domain.left))?;
    writeln!(out, "right: {}", end_state(prof.domain.right))?;
    for (name, e) in [("U(-1)", Endpoint::Minus1), ("U(1)", Endpoint::Plus1)] {
        if prof.domain.reaches(e) {
            writeln!(out, "{name}: {}", pole_summary(&prof, e).0)?;
        }
    }
    if let Some(path) = path {
        let f = format_of(path)?;
        let s = match f {
            Format::Csv => render::samples_csv(&prof),
            Format::Json => render::samples_json(&prof),
            Format::Svg => {
                return Err(CliError::Usage(
                    "profiles are written as csv or json".into(),
                ))
            }
        };
        std::fs::write(path, s)?;
        writeln!(out, "wrote: {}", path.display())?;
    }
    Ok(())
}

fn family(
    coeffs: &Coeffs,
    leaves: usize,
    samples: usize,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let p = coeffs.params()?;
    let fol = foliation(&p, leaves)?;
    let named: Vec<(String, Profile64)> = fol
        .into_iter()
        .enumerate()
        .map(|(k, l)| (format!("U_{}", k + 1), l))
        .collect();
    writeln!(out, "case: {}", p.classify_case())?;
    for (name, l) in &named {
        writeln!(
            out,
            "{name}: U(0) = {}",
            l.eval(0.0).map(fmt).unwrap_or_default()
        )?;
    }
    if let Some(path) = path {
        let view = View {
            samples,
            ..View::default()
        };
        emit(
            RenderKind::ProfileFamily,
            path,
            view,
            Payload::Profiles(&named),
            out,
        )?;
    }
    Ok(())
}

fn critical(
    nu: f64,
    c1: f64,
    c2: f64,
    samples: usize,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let prof = critical_profile(nu, c1, c2)?;
    let bar = homsol::params::bar_c3(c1, c2, nu)?;
    let a = nu + (nu * nu + c1).sqrt();
    let b = -nu - (nu * nu + c2).sqrt();
    writeln!(out, "bar_c3: {}", fmt(bar))?;
    writeln!(out, "U*(y) = {} (1 - y) + {} (1 + y)", fmt(a), fmt(b))?;
    writeln!(out, "U*(-1) = {}, U*(1) = {}", fmt(2.0 * a), fmt(2.0 * b))?;
    if let Some(path) = path {
        let view = View {
            samples,
            ..View::default()
        };
        emit(
            RenderKind::ProfileFamily,
            path,
            view,
            Payload::Profiles(&[("U_star".to_string(), prof)]),
            out,
        )?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn limit(
    c: (f64, f64, f64),
    nus: &[f64],
    mode: SweepMode,
    theta0: f64,
    eps: f64,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let r = match mode {
        SweepMode::Interior => interior_limit_sweep(c, theta0, nus, eps)?,
        SweepMode::Extremal => extremal_limit_sweep(c, nus, eps)?,
    };
    if let Some(path) = path {
        emit(
            RenderKind::Sweep,
            path,
            View::default(),
            Payload::Sweep(&r),
            out,
        )?;
    }
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&render::sweep_json(&r)).expect("json")
    )?;
    Ok(())
}

pub fn meromorphic(f: FKind, a: Complex<f64>, alpha: f64, b: Complex<f64>) -> MeromorphicSpec<f64> {
    match f {
        FKind::Linear => MeromorphicSpec::Linear { a },
        FKind::Power => MeromorphicSpec::Power { a, alpha },
        FKind::Exp => MeromorphicSpec::Exponential { a, b },
    }
}

pub fn liouville_samples(
    f: &MeromorphicSpec<f64>,
    label: &str,
    n: usize,
    margin: f64,
) -> Result<LiouvilleSamples, CliError> {
    f.validate()?;
    let grid = ChartGrid::uniform(n, n, margin)?;
    let mut rows = Vec::new();
    for pt in grid.points() {
        let pt = pt?;
        let v = liouville_velocity(f, &pt)?;
        rows.push([pt.theta, pt.phi, v.r, v.theta, v.phi]);
    }
    let landau_gamma = match f {
        MeromorphicSpec::Linear { a } => landau_for_linear(*a).ok().map(|c| c.eval(0.0)),
        _ => None,
    };
    Ok(LiouvilleSamples {
        label: label.to_string(),
        residual: liouville_residual(f, &grid)?,
        residual_fd: liouville_residual_fd(f, &grid, 1e-3)?,
        meridian_variance: meridian_variance(f, &grid)?,
        landau_gamma,
        rows,
    })
}

/// Leaf with `U(cos theta0) = 0` on the layer-resolving grid.
pub fn viscous_leaf(c: (f64, f64, f64), nu: f64, theta0: f64) -> Result<Profile64, CliError> {
    let p = FlowParams64::new(nu, c.0, c.1, c.2)?;
    let req = SolveRequest::new(p, theta0.cos(), 0.0).with_grid(standard_grid(LAYER_GRID_INTERIOR));
    let (prof, class) = integrate_ivp(&req)?;
    if class.class != ClassKind::Global {
        return Err(Error::SelectionFailure.into());
    }
    Ok(prof)
}

fn meridional_box(b: &[f64], n: usize) -> Result<MeridionalBox, CliError> {
    match *b {
        [a, bb, c, d] => Ok(MeridionalBox {
            x1: (a, bb),
            x3: (c, d),
            n1: n,
            n3: n,
        }),
        _ => Err(CliError::Usage("--box takes four numbers".into())),
    }
}

#[allow(clippy::too_many_arguments)]
fn streamlines(
    coeffs: &Coeffs,
    gamma: f64,
    ybar: f64,
    euler: Option<Branch>,
    fine: bool,
    bbox: &[f64],
    n: usize,
    levels: usize,
    path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let p = coeffs.params()?;
    let bbox = meridional_box(bbox, n)?;
    let src = match euler {
        Some(Branch::Plus) => AngularProfile::euler(p, 1.0)?,
        Some(Branch::Minus) => AngularProfile::euler(p, -1.0)?,
        None => {
            let mut req = SolveRequest::new(p, ybar, gamma);
            if fine {
                req = req.with_grid(standard_grid(LAYER_GRID_INTERIOR));
            }
            AngularProfile::from_profile(&integrate_ivp(&req)?.0)
        }
    };
    let s = stream::streamlines(&src, bbox, None, levels)?;
    emit(
        RenderKind::Streamlines,
        path,
        View::default(),
        Payload::Streamlines(&s),
        out,
    )?;
    writeln!(out, "polylines: {}", s.lines.len())?;
    writeln!(out, "max_tangency_defect: {}", fmt(s.max_defect))?;
    Ok(())
}

pub fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Classify { coeffs, tol, json } => classify(&coeffs, tol, json, out),
        Command::Solve {
            coeffs,
            gamma,
            ybar,
            rep,
            out: path,
        } => solve(&coeffs, gamma, ybar, rep, path.as_deref(), out),
        Command::Family {
            coeffs,
            leaves,
            samples,
            out: path,
        } => family(&coeffs, leaves, samples, path.as_deref(), out),
        Command::Critical {
            nu,
            c1,
            c2,
            samples,
            out: path,
        } => critical(nu, c1, c2, samples, path.as_deref(), out),
        Command::Limit {
            c,
            nus,
            mode,
            theta0,
            eps,
            out: path,
        } => limit(c, &nus.0, mode, theta0, eps, path.as_deref(), out),
        Command::Liouville {
            f,
            a,
            alpha,
            b,
            grid,
            margin,
            out: path,
        } => {
            let spec = meromorphic(f, a, alpha, b);
            let label = format!("{spec:?}");
            let s = liouville_samples(&spec, &label, grid, margin)?;
            if let Some(path) = path {
                emit(
                    RenderKind::LiouvilleField,
                    &path,
                    View::default(),
                    Payload::Liouville(&s),
                    out,
                )?;
            }
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&render::liouville_json(&s)).expect("json")
            )?;
            Ok(())
        }
        Command::Streamlines {
            coeffs,
            gamma,
            ybar,
            euler,
            fine,
            r#box,
            n,
            levels,
            out: path,
        } => streamlines(
            &coeffs, gamma, ybar, euler, fine, &r#box.0, n, levels, &path, out,
        ),
        Command::Figures { out_dir } => {
            let m = crate::figures::write_all(&out_dir)?;
            for f in &m.files {
                writeln!(out, "wrote: {}", out_dir.join(&f.name).display())?;
            }
            writeln!(out, "max_tangency_defect: {}", fmt(m.max_defect))?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_fractions() {
        assert_eq!(parse_num("25/9").unwrap(), 25.0 / 9.0);
        assert_eq!(parse_num(" -1.5 ").unwrap(), -1.5);
        assert!(parse_num("1/0").is_err());
        assert_eq!(parse_triple("0,0,-12").unwrap(), (0.0, 0.0, -12.0));
        assert!(parse_triple("1,2").is_err());
        assert_eq!(parse_complex("3").unwrap(), Complex::new(3.0, 0.0));
    }

    #[test]
    fn compact_format() {
        assert_eq!(fmt(4.0), "4");
        assert_eq!(fmt(-2.188439628), "-2.188439628");
        assert_eq!(fmt(-0.0), "0");
        assert_eq!(fmt(2.5e-7), "2.500000e-7");
    }
}
