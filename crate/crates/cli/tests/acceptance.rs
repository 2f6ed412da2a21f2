//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::{Duration, Instant};

use homsol::classify::{extremal_profiles, gamma_bounds, singularity_type, SingKind};
use homsol::closedform::{in_i_nu, Alpha, ClosedForm};
use homsol::liouville::{
    landau_for_linear, liouville_residual, liouville_velocity, meridian_variance, ChartGrid,
    MeromorphicSpec,
};
use homsol::params::{Endpoint, FlowParams};
use homsol::riccati::{
    boundary_limit, hypergeom_rep, integrate_ivp, linear_rep, ClassKind, SolveRequest,
};
use homsol::viscosity::interior_limit_sweep;
use homsol::{Error, FlowParams64, Profile64};
use homsol_cli::figures::{build_all, write_all, TANGENCY_BOUND};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn p(nu: f64, c1: f64, c2: f64, c3: f64) -> FlowParams64 {
    FlowParams::new(nu, c1, c2, c3).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: f64) -> Result<(), String> {
    ensure(
        t.as_secs_f64() < limit,
        format!("took {:.1} s, limit {limit} s", t.as_secs_f64()),
    )
}

/// Composite 8-node Gauss-Legendre on `n` panels (independent of the
/// library's AGM).
fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    const X: [f64; 4] = [
        0.1834346424956498,
        0.5255324099163290,
        0.7966664774136267,
        0.9602898564975363,
    ];
    const W: [f64; 4] = [
        0.3626837833783620,
        0.3137066458778873,
        0.2223810344533745,
        0.1012285362903763,
    ];
    let h = (b - a) / n as f64;
    let mut s = 0.0;
    for k in 0..n {
        let m = a + h * (k as f64 + 0.5);
        for i in 0..4 {
            let d = 0.5 * h * X[i];
            s += W[i] * (f(m - d) + f(m + d));
        }
    }
    0.5 * h * s
}

fn closed_form_residuals() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut check = |f: ClosedForm<f64>| -> Result<(), String> {
        f.validate().map_err(|e| format!("{f:?}: {e}"))?;
        let r = f
            .profile()
            .map_err(|e| e.to_string())?
            .max_residual(-0.99, 0.99);
        worst = worst.max(r);
        count += 1;
        ensure(r <= 1e-8, format!("{f:?}: residual {r:e}"))
    };
    for _ in 0..20 {
        let nu = rng.gen_range(0.2..3.0);
        let s: f64 = rng.gen_range(0.01..0.99) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        check(ClosedForm::Landau {
            nu,
            gamma: 2.0 * nu * s,
        })?;
    }
    for branch in 0..3 {
        let mut n = 0;
        while n < 20 {
            let nu = rng.gen_range(0.3..2.0);
            let (tau, sigma) = match branch {
                0 => {
                    let t = rng.gen_range(-2.0 * nu..1.95 * nu);
                    (t, nu - t / 4.0 - rng.gen_range(0.01..2.0))
                }
                1 => (2.0 * nu, nu / 2.0 - rng.gen_range(0.01..2.0)),
                _ => {
                    let t = 2.0 * nu + rng.gen_range(0.1..3.0);
                    (t, t / 4.0)
                }
            };
            if !in_i_nu(nu, tau, sigma) {
                continue;
            }
            check(ClosedForm::OneSing { nu, tau, sigma })?;
            n += 1;
        }
    }
    for _ in 0..20 {
        let nu = rng.gen_range(0.3..2.0);
        let (k1, k2) = (rng.gen_range(-1.0..4.0), rng.gen_range(-1.0..4.0));
        check(ClosedForm::Critical {
            nu,
            c1: k1 * nu * nu,
            c2: k2 * nu * nu,
        })?;
    }
    for _ in 0..20 {
        check(ClosedForm::Elliptic {
            alpha: Alpha::Finite(rng.gen_range(0.0..50.0)),
        })?;
    }
    for _ in 0..20 {
        let (nu, a, b) = (
            rng.gen_range(0.3..2.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        check(ClosedForm::EulerNs { nu, a, b })?;
    }
    within(t0.elapsed(), 5.0)?;
    Ok(format!("{count} members, max residual {worst:.1e}"))
}

fn reference_values() -> Outcome {
    let tol = 1e-12;
    for ((c1, c2), want) in [
        ((0.0, 0.0), -4.0),
        ((-1.0, 8.0), -7.5),
        ((8.0, -1.0), -7.5),
        ((-1.0, -1.0), 0.0),
    ] {
        let got = p(1.0, c1, c2, 0.0).bar_c3().map_err(|e| e.to_string())?;
        ensure(
            (got - want).abs() <= tol,
            format!("bar_c3({c1}, {c2}) = {got}"),
        )?;
    }
    for ((c1, c2, c3), want) in [
        ((0.0, 0.0, 0.5), [0.0, 4.0, -4.0, 0.0]),
        ((-1.0, 8.0, -1.5), [2.0, 2.0, -8.0, 4.0]),
        ((8.0, -1.0, -1.5), [-4.0, 8.0, -2.0, -2.0]),
    ] {
        let t = p(1.0, c1, c2, c3).tau_values().map_err(|e| e.to_string())?;
        let got = [t.tau1, t.tau2, t.tau1p, t.tau2p];
        ensure(
            got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol),
            format!("tau set {got:?}"),
        )?;
    }
    // 2 (y - 2/3)^2 = 8/9 - (8/3) y + 2 y^2
    let q = p(1.0, 25.0 / 9.0, 1.0 / 9.0, -2.0).poly_coeffs();
    ensure(
        q.iter()
            .zip([8.0 / 9.0, -8.0 / 3.0, 2.0])
            .all(|(g, w)| (g - w).abs() <= tol),
        format!("P_c coefficients {q:?}"),
    )?;
    Ok("bar_c3, tau sets and P_c identity within 1e-12".into())
}

fn gamma_interval() -> Outcome {
    let t0 = Instant::now();
    fn e(s: &'static str) -> impl Fn(Error) -> String {
        move |err| format!("{s}: {err}")
    }
    let g = gamma_bounds(&p(1.0, 0.0, 0.0, 0.0), 1e-7).map_err(e("c = 0"))?;
    ensure(
        (g.gamma_minus + 2.0).abs() <= 1e-6 && (g.gamma_plus - 2.0).abs() <= 1e-6,
        format!("c = 0: ({}, {})", g.gamma_minus, g.gamma_plus),
    )?;
    let half = std::f64::consts::FRAC_PI_2;
    let k = quad(
        |t| 1.0 / (1.0 - 0.5 * t.sin().powi(2)).sqrt(),
        0.0,
        half,
        64,
    );
    let ee = quad(|t| (1.0 - 0.5 * t.sin().powi(2)).sqrt(), 0.0, half, 64);
    let g0 = k / (2.0 * ee - k);
    let g = gamma_bounds(&p(1.0, 0.0, 0.0, 0.5), 1e-7).map_err(e("c3 = 0.5"))?;
    ensure(
        (g.gamma_plus - g0).abs() <= 1e-4 && (g.gamma_minus + g0).abs() <= 1e-4,
        format!("c3 = 0.5: ({}, {}) vs {g0}", g.gamma_minus, g.gamma_plus),
    )?;
    let mut widest = 0.0f64;
    for (c1, c2) in [
        (0.0, 0.0),
        (-1.0, 8.0),
        (8.0, -1.0),
        (-1.0, -1.0),
        (0.5, 2.0),
    ] {
        let pr = p(1.0, c1, c2, 0.0);
        let pr = pr.with_c3(pr.bar_c3().unwrap());
        let g = gamma_bounds(&pr, 1e-7).map_err(e("critical"))?;
        widest = widest.max(g.width());
        ensure(
            g.width() <= 2e-6,
            format!("width {} at c = ({c1}, {c2}, bar_c3)", g.width()),
        )?;
    }
    within(t0.elapsed(), 10.0)?;
    Ok(format!(
        "gamma+ = {:.8} (oracle {g0:.8}), critical width <= {widest:.1e}",
        g.gamma_plus
    ))
}

fn common_nodes(a: &Profile64, b: &Profile64) -> Result<(usize, f64), String> {
    let (mut n, mut worst) = (0, 0.0f64);
    for (y, v) in a.y.iter().zip(&a.u) {
        if y.abs() > 0.95 || !b.domain.contains(*y) {
            continue;
        }
        if let Some(w) = b.eval(*y) {
            let d = (v - w).abs() / v.abs().max(1.0);
            worst = worst.max(d);
            n += 1;
        }
    }
    ensure(worst <= 1e-6, format!("relative gap {worst:e}"))?;
    Ok((n, worst))
}

fn cross_representation() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst, mut hyper, mut degenerate) = (0.0f64, 0, 0);
    for _ in 0..50 {
        let nu = rng.gen_range(0.5..2.0);
        let (k1, k2) = (rng.gen_range(-1.0..4.0), rng.gen_range(-1.0..4.0));
        let pr = p(nu, k1 * nu * nu, k2 * nu * nu, rng.gen_range(-6.0..3.0));
        let req = SolveRequest::new(pr, rng.gen_range(-0.5..0.5), rng.gen_range(-3.0..3.0));
        let tag = |e: Error| format!("{req:?}: {e}");
        let (a, _) = integrate_ivp(&req).map_err(tag)?;
        let (_, b) = linear_rep(&req).map_err(tag)?;
        let (n, w) = common_nodes(&b, &a).map_err(|m| format!("linear: {m}"))?;
        ensure(n > 0, "no common nodes")?;
        worst = worst.max(w);
        match hypergeom_rep(&req) {
            Ok(c) => {
                let (_, w) = common_nodes(&c, &a).map_err(|m| format!("hypergeometric: {m}"))?;
                worst = worst.max(w);
                hyper += 1;
            }
            Err(Error::DegenerateC) => degenerate += 1,
            Err(e) => return Err(tag(e)),
        }
    }
    within(t0.elapsed(), 30.0)?;
    Ok(format!("50 requests ({hyper} with hypergeometric path, {degenerate} integer C), max gap {worst:.1e}"))
}

fn domain_taxonomy() -> Outcome {
    let pr = p(1.0, 0.0, 0.0, -12.0);
    let mut seen = [0usize; 4];
    // both extremals blow up at the equator, so the scan also starts off it
    for yb in [-0.5, 0.0, 0.5] {
        for k in 0..100 {
            let g = -20.0 + 40.0 * k as f64 / 99.0;
            let (_, c) = integrate_ivp(&SolveRequest::new(pr, yb, g)).map_err(|e| e.to_string())?;
            seen[c.class as usize] += 1;
        }
    }
    ensure(
        seen[ClassKind::Global as usize] == 0,
        format!("Global found: {seen:?}"),
    )?;
    ensure(
        seen[1] > 0 && seen[2] > 0 && seen[3] > 0,
        format!("missing a local class: {seen:?}"),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut n = 0;
    while n < 200 {
        let nu = rng.gen_range(0.5..2.0);
        let (k1, k2) = (rng.gen_range(-1.0..4.0), rng.gen_range(-1.0..4.0));
        let p0 = p(nu, k1 * nu * nu, k2 * nu * nu, 0.0);
        let pr = p0.with_c3(p0.bar_c3().unwrap() + rng.gen_range(0.0..6.0));
        if !pr.in_j() {
            continue;
        }
        let req = SolveRequest::new(pr, rng.gen_range(-0.9..0.9), rng.gen_range(-10.0..10.0));
        let (_, c) = integrate_ivp(&req).map_err(|e| e.to_string())?;
        ensure(c.class != ClassKind::A3, format!("A3 inside J_nu: {req:?}"))?;
        n += 1;
    }
    Ok(format!(
        "Case 6 scan Global/A1/A2/A3 = {}/{}/{}/{}; 0 of 200 in J_nu are A3",
        seen[0], seen[1], seen[2], seen[3]
    ))
}

fn boundary_values() -> Outcome {
    let (mut worst, mut worst_raw) = (0.0f64, 0.0f64);
    let mut checked = 0;
    for c in [
        (0.0, 0.0, 0.5),
        (-1.0, 8.0, -1.5),
        (8.0, -1.0, -1.5),
        (-1.0, -1.0, 0.5),
    ] {
        let pr = p(1.0, c.0, c.1, c.2);
        let t = pr.tau_values().map_err(|e| e.to_string())?;
        let (up, lo) = extremal_profiles(&pr).map_err(|e| e.to_string())?;
        let g = gamma_bounds(&pr, 1e-7).map_err(|e| e.to_string())?;
        // upper: (tau2, tau2'), lower: (tau1, tau1'), interior: (tau1, tau2')
        let mut cases = vec![
            (up, (t.tau2, t.tau2p), "upper".to_string()),
            (lo, (t.tau1, t.tau1p), "lower".to_string()),
        ];
        for s in [0.25, 0.5, 0.75] {
            let gk = g.gamma_minus + s * g.width();
            let (leaf, _) =
                integrate_ivp(&SolveRequest::new(pr, 0.0, gk)).map_err(|e| e.to_string())?;
            cases.push((leaf, (t.tau1, t.tau2p), format!("gamma = {gk:.4}")));
        }
        for (prof, (a, b), name) in cases {
            for (end, want) in [(Endpoint::Minus1, a), (Endpoint::Plus1, b)] {
                let got = boundary_limit(&prof, end).map_err(|e| format!("{c:?} {name}: {e}"))?;
                let d = (got.value - want).abs();
                worst = worst.max(d);
                if got.raw.is_finite() {
                    worst_raw = worst_raw.max((got.raw - want).abs());
                }
                checked += 1;
                ensure(
                    d <= 1e-3,
                    format!("{c:?} {name} at {end:?}: {} vs {want}", got.value),
                )?;
            }
        }
    }
    Ok(format!(
        "{checked} endpoint values, max deviation {worst:.1e} (before snapping {worst_raw:.1e})"
    ))
}

fn singularity_typing() -> Outcome {
    for g in [-1.5, -0.5, 0.7, 1.6] {
        let l = ClosedForm::Landau { nu: 1.0, gamma: g }
            .profile()
            .map_err(|e| e.to_string())?;
        for e in [Endpoint::Minus1, Endpoint::Plus1] {
            let s = singularity_type(&l, e, 1.0).map_err(|e| e.to_string())?;
            ensure(
                s.kind == SingKind::Type1,
                format!("Landau gamma = {g} at {e:?}: {:?}", s.kind),
            )?;
        }
    }
    let pr = p(1.0, 0.0, 0.0, 0.5);
    let mut coeffs = Vec::new();
    for g in [-1.5, -0.5, 0.0, 0.5, 1.5, 2.0] {
        let (leaf, _) = integrate_ivp(&SolveRequest::new(pr, 0.0, g)).map_err(|e| e.to_string())?;
        for e in [Endpoint::Minus1, Endpoint::Plus1] {
            let s = singularity_type(&leaf, e, 1.0)
                .map_err(|err| format!("gamma = {g} at {e:?}: {err}"))?;
            ensure(
                s.kind == SingKind::Type2,
                format!("gamma = {g} at {e:?}: {:?}", s.kind),
            )?;
            let m = s.log_coefficient.ok_or("missing log coefficient")?;
            ensure(
                (m + 1.0).abs() <= 0.1,
                format!("gamma = {g}: log coefficient {m}"),
            )?;
            coeffs.push(m);
        }
    }
    let (up, lo) = extremal_profiles(&pr).map_err(|e| e.to_string())?;
    let su = singularity_type(&up, Endpoint::Minus1, 1.0).map_err(|e| e.to_string())?;
    let sl = singularity_type(&lo, Endpoint::Plus1, 1.0).map_err(|e| e.to_string())?;
    ensure(
        su.kind == SingKind::Type3 && sl.kind == SingKind::Type3,
        "extremal not Type3 at its pole",
    )?;
    let spread = coeffs
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &m| (a.min(m), b.max(m)));
    Ok(format!(
        "Landau Type1; interior Type2 with log coefficient in [{:.4}, {:.4}]; extremals Type3",
        spread.0, spread.1
    ))
}

fn vanishing_viscosity() -> Outcome {
    let t0 = Instant::now();
    let nus = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let r = interior_limit_sweep(
        (25.0 / 9.0, 1.0 / 9.0, -2.0),
        std::f64::consts::FRAC_PI_2,
        &nus,
        0.1,
    )
    .map_err(|e| e.to_string())?;
    let fit = r.fit_sup.ok_or("no fit")?;
    let per = |f: Option<homsol::viscosity::RateFit<f64>>| f.map_or(f64::NAN, |f| f.exponent);
    let detail = format!(
        "sup exponent {:.3} (plus window {:.3}, minus window {:.3})",
        fit.exponent,
        per(r.fit_plus),
        per(r.fit_minus)
    );
    ensure(
        r.sup_errors_decrease(1.2),
        format!("errors not decreasing: {detail}"),
    )?;
    ensure(
        fit.exponent >= 0.8 && fit.exponent <= 1.2,
        format!("exponent out of range: {detail}"),
    )?;
    for pt in &r.points {
        let l = pt.layer.ok_or("no layer")?;
        ensure(
            l.center.abs() <= 0.05,
            format!("layer center {} at nu = {}", l.center, pt.nu),
        )?;
    }
    ensure(r.widths_decrease(), "layer widths not strictly decreasing")?;
    within(t0.elapsed(), 60.0)?;
    let widths: Vec<String> = r
        .points
        .iter()
        .map(|p| format!("{:.4}", p.layer.unwrap().width))
        .collect();
    Ok(format!("{detail}; widths {}", widths.join(" > ")))
}

fn liouville() -> Outcome {
    let grid = ChartGrid::uniform(64, 64, 0.1).map_err(|e| e.to_string())?;
    let one = Complex::new(1.0, 0.0);
    let specs = [
        MeromorphicSpec::Linear { a: one },
        MeromorphicSpec::Linear {
            a: Complex::new(3.0, 0.0),
        },
        MeromorphicSpec::Power { a: one, alpha: 2.0 },
        MeromorphicSpec::Exponential {
            a: one,
            b: Complex::new(0.3, 0.0),
        },
    ];
    let mut worst = 0.0f64;
    for f in &specs {
        let r = liouville_residual(f, &grid).map_err(|e| e.to_string())?;
        worst = worst.max(r);
        ensure(r <= 1e-6, format!("{f:?}: residual {r:e}"))?;
    }
    // f = a z against U = 2 (1 - y^2) / (y + k), k = (|a|^2 + 1) / (|a|^2 - 1)
    let mut landau_gap = 0.0f64;
    for a in [
        Complex::new(3.0, 0.0),
        Complex::new(1.2, -0.9),
        Complex::new(0.4, 0.2),
    ] {
        let m = a.norm_sqr();
        let k = (m + 1.0) / (m - 1.0);
        let lf = landau_for_linear(a).map_err(|e| e.to_string())?;
        for pt in grid.points() {
            let pt = pt.map_err(|e| e.to_string())?;
            let v = liouville_velocity(&MeromorphicSpec::Linear { a }, &pt)
                .map_err(|e| e.to_string())?;
            let y = pt.theta.cos();
            let want = 2.0 * (1.0 - y * y) / (y + k);
            let gap = (v.theta * pt.theta.sin() - want)
                .abs()
                .max((lf.eval(y) - want).abs())
                .max(v.phi.abs());
            landau_gap = landau_gap.max(gap);
        }
    }
    ensure(landau_gap <= 1e-6, format!("Landau gap {landau_gap:e}"))?;
    let var = meridian_variance(&specs[3], &grid).map_err(|e| e.to_string())?;
    ensure(var >= 1e-2, format!("meridian variance {var:e}"))?;
    Ok(format!(
        "max residual {worst:.1e}, Landau gap {landau_gap:.1e}, exp meridian variance {var:.2e}"
    ))
}

fn figures() -> Outcome {
    let t0 = Instant::now();
    let dir_a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir_b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let ma = write_all(dir_a.path()).map_err(|e| e.to_string())?;
    within(t0.elapsed(), 120.0)?;
    let first = t0.elapsed();
    write_all(dir_b.path()).map_err(|e| e.to_string())?;
    let mut svgs = 0;
    for f in &ma.files {
        let a = std::fs::read(dir_a.path().join(&f.name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dir_b.path().join(&f.name)).map_err(|e| e.to_string())?;
        ensure(a == b, format!("{} differs between runs", f.name))?;
        if let Some(d) = f.defect {
            svgs += 1;
            ensure(
                d <= TANGENCY_BOUND,
                format!("{}: tangency defect {d:e}", f.name),
            )?;
        }
    }
    let again = build_all().map_err(|e| e.to_string())?;
    ensure(again.files.len() == ma.files.len(), "file count changed")?;
    Ok(format!(
        "{} files in {:.1} s, byte-stable, {svgs} streamline plots with max defect {:.1e}",
        ma.files.len(),
        first.as_secs_f64(),
        ma.max_defect
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form residuals", closed_form_residuals),
        ("reference values", reference_values),
        ("gamma interval", gamma_interval),
        ("cross-representation", cross_representation),
        ("domain taxonomy", domain_taxonomy),
        ("boundary values", boundary_values),
        ("singularity typing", singularity_typing),
        ("vanishing viscosity", vanishing_viscosity),
        ("liouville", liouville),
        ("figures", figures),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS {:>2} {name} ({secs:.2} s): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2} s): {msg}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
