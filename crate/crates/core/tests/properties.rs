use homsol::classify::{extremal_profiles, foliation, gamma_bounds};
use homsol::closedform::{in_i_nu, recover_field, Alpha, ClosedForm};
use homsol::liouville::{liouville_residual, liouville_residual_fd, ChartGrid, MeromorphicSpec};
use homsol::params::{Endpoint, FlowParams};
use homsol::profile::Profile;
use homsol::riccati::{
    hypergeom_rep, integrate_ivp, linear_rep, reaches_endpoint, ClassKind, RiccatiTol, SolveRequest,
};
use num_complex::Complex;
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn close_on_common_nodes(
    a: &Profile<f64>,
    b: &Profile<f64>,
    rel: f64,
) -> Result<usize, TestCaseError> {
    let mut n = 0;
    for (y, v) in a.y.iter().zip(&a.u) {
        if y.abs() > 0.95 || !b.domain.contains(*y) {
            continue;
        }
        if let Some(w) = b.eval(*y) {
            prop_assert!((v - w).abs() <= rel * v.abs().max(1.0), "y={y}: {v} vs {w}");
            n += 1;
        }
    }
    Ok(n)
}

/// Heading to `-infinity` at the right end of the domain.
fn falls(p: &Profile<f64>) -> bool {
    let n = p.len();
    p.u[n - 1] < -1.0 && p.u[n - 1] < p.u[n - 2] && p.u[n - 2] < p.u[n - 3]
}

/// Coming from `+infinity` at the left end of the domain.
fn rises(p: &Profile<f64>) -> bool {
    p.u[0] > 1.0 && p.u[0] > p.u[1] && p.u[1] > p.u[2]
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn landau_residual(nu in 0.2f64..3.0, s in -0.99f64..0.99) {
        prop_assume!(s.abs() > 1e-3);
        let f = ClosedForm::Landau { nu, gamma: 2.0 * nu * s };
        prop_assert!(f.profile().unwrap().max_residual(-0.99, 0.99) <= 1e-8);
    }

    #[test]
    fn one_sing_residual(nu in 0.3f64..2.0, k in 0.0f64..3.0, branch in 0usize..3, d in 0.01f64..2.0) {
        let (tau, sigma) = match branch {
            0 => { let t = 2.0 * nu * (1.0 - k / 3.0) - 0.05; (t, nu - t / 4.0 - d) }
            1 => (2.0 * nu, nu / 2.0 - d),
            _ => { let t = 2.0 * nu + 0.1 + k; (t, t / 4.0) }
        };
        prop_assume!(in_i_nu(nu, tau, sigma));
        let f = ClosedForm::OneSing { nu, tau, sigma };
        prop_assert!(f.profile().unwrap().max_residual(-0.99, 0.99) <= 1e-8);
    }

    #[test]
    fn critical_and_euler_residuals(nu in 0.3f64..2.0, c1 in -1.0f64..4.0, c2 in -1.0f64..4.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let c = ClosedForm::Critical { nu, c1: c1 * nu * nu, c2: c2 * nu * nu };
        prop_assert!(c.profile().unwrap().max_residual(-0.99, 0.99) <= 1e-8);
        let e = ClosedForm::EulerNs { nu, a, b };
        prop_assert!(e.profile().unwrap().max_residual(-0.99, 0.99) <= 1e-8);
    }

    #[test]
    fn elliptic_residual(alpha in 0.0f64..50.0) {
        let f = ClosedForm::Elliptic { alpha: Alpha::Finite(alpha) };
        prop_assert!(f.profile().unwrap().max_residual(-0.99, 0.99) <= 1e-8);
    }

    #[test]
    fn divergence_identity(nu in 0.3f64..2.0, s in -0.95f64..0.95) {
        prop_assume!(s.abs() > 1e-2);
        // u_r = -(1 / sin) d(sin u_theta) / d theta
        let prof = ClosedForm::Landau { nu, gamma: 2.0 * nu * s }.profile().unwrap();
        let f = recover_field(&prof).unwrap();
        for i in 1..f.theta.len() - 1 {
            let (t0, t1, t2) = (f.theta[i - 1], f.theta[i], f.theta[i + 1]);
            if t1.sin() < 0.3 || (t2 - t1 - (t1 - t0)).abs() > 1e-9 {
                continue;
            }
            let d = (t2.sin() * f.u_theta[i + 1] - t0.sin() * f.u_theta[i - 1]) / (t2 - t0);
            prop_assert!((f.u_r[i] + d / t1.sin()).abs() < 1e-3);
        }
    }

    #[test]
    fn liouville_formula_solves_the_sphere_equation(ar in 0.2f64..4.0, ai in -1.0f64..1.0, br in -0.5f64..0.5, bi in -0.5f64..0.5, alpha in 0.5f64..3.0) {
        let grid = ChartGrid::uniform(16, 16, 0.2).unwrap();
        let a = Complex::new(ar, ai);
        for f in [
            MeromorphicSpec::Linear { a },
            MeromorphicSpec::Power { a, alpha },
            MeromorphicSpec::Exponential { a, b: Complex::new(br, bi) },
        ] {
            if let MeromorphicSpec::Exponential { b, .. } = f {
                prop_assume!(b.norm() > 1e-2);
            }
            prop_assert!(liouville_residual(&f, &grid).unwrap() <= 1e-6);
            prop_assert!(liouville_residual_fd(&f, &grid, 1e-3).unwrap() <= 1e-4);
        }
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn three_representations_agree(nu in 0.5f64..2.0, k1 in -1.0f64..4.0, k2 in -1.0f64..4.0, c3 in -6.0f64..3.0, g in -3.0f64..3.0, yb in -0.5f64..0.5) {
        let p = FlowParams::new(nu, k1 * nu * nu, k2 * nu * nu, c3).unwrap();
        let req = SolveRequest::new(p, yb, g);
        let (a, _) = integrate_ivp(&req).unwrap();
        let (_, b) = linear_rep(&req).unwrap();
        prop_assert!(close_on_common_nodes(&b, &a, 1e-6)? > 0);
        match hypergeom_rep(&req) {
            Ok(c) => { prop_assert!(close_on_common_nodes(&c, &a, 1e-6)? > 0); }
            Err(homsol::Error::DegenerateC) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn leaves_are_ordered(c3 in -3.0f64..3.0, g in -3.0f64..3.0, dg in 0.01f64..2.0) {
        let p = FlowParams::new(1.0, 0.5, 1.5, c3).unwrap();
        let (a, _) = integrate_ivp(&SolveRequest::new(p, 0.0, g)).unwrap();
        let (b, _) = integrate_ivp(&SolveRequest::new(p, 0.0, g + dg)).unwrap();
        for (y, v) in a.y.iter().zip(&a.u) {
            if b.domain.contains(*y) && y.abs() < 0.999 {
                prop_assert!(*v < b.eval(*y).unwrap());
            }
        }
    }

    #[test]
    fn blowup_signs_match_the_class(c3 in -14.0f64..3.0, g in -30.0f64..30.0) {
        let p = FlowParams::new(1.0, 0.0, 0.0, c3).unwrap();
        let (prof, c) = integrate_ivp(&SolveRequest::new(p, 0.0, g)).unwrap();
        match c.class {
            ClassKind::Global => prop_assert!(c.blowup_points.is_empty()),
            ClassKind::A1 => prop_assert!(falls(&prof)),
            ClassKind::A2 => prop_assert!(rises(&prof)),
            ClassKind::A3 => prop_assert!(falls(&prof) && rises(&prof)),
        }
        if p.in_j() {
            prop_assert!(c.class != ClassKind::A3);
        }
    }

    #[test]
    fn no_two_sided_blowup_in_j(nu in 0.5f64..2.0, k1 in -1.0f64..4.0, k2 in -1.0f64..4.0, up in 0.0f64..6.0, g in -10.0f64..10.0, yb in -0.9f64..0.9) {
        let p0 = FlowParams::new(nu, k1 * nu * nu, k2 * nu * nu, 0.0).unwrap();
        let p = p0.with_c3(p0.bar_c3().unwrap() + up);
        prop_assume!(p.in_j());
        let (_, c) = integrate_ivp(&SolveRequest::new(p, yb, g)).unwrap();
        prop_assert!(c.class != ClassKind::A3);
    }

    #[test]
    fn solves_are_deterministic(c3 in -6.0f64..3.0, g in -3.0f64..3.0) {
        let req = SolveRequest::new(FlowParams::new(1.0, 0.3, 2.0, c3).unwrap(), 0.1, g);
        prop_assert_eq!(integrate_ivp(&req).unwrap(), integrate_ivp(&req).unwrap());
    }
}

proptest! {
    #![proptest_config(cfg(8))]

    #[test]
    fn bounds_bracket_reachability(k1 in 0.0f64..3.0, k2 in 0.0f64..3.0, up in 0.5f64..4.0) {
        let p0 = FlowParams::new(1.0, k1, k2, 0.0).unwrap();
        let p = p0.with_c3(p0.bar_c3().unwrap() + up);
        let tol = 1e-7;
        let g = gamma_bounds(&p, tol).unwrap();
        let rt = RiccatiTol::default();
        let r = |g: f64, e| reaches_endpoint(&p, 0.0, g, e, &rt).unwrap();
        prop_assert!(!r(g.gamma_minus - 10.0 * tol, Endpoint::Plus1));
        prop_assert!(r(g.gamma_minus + 10.0 * tol, Endpoint::Plus1));
        prop_assert!(r(g.gamma_plus - 10.0 * tol, Endpoint::Minus1));
        prop_assert!(!r(g.gamma_plus + 10.0 * tol, Endpoint::Minus1));
    }

    #[test]
    fn symmetric_coefficients(k in -0.9f64..3.0, up in 0.5f64..4.0) {
        let p0 = FlowParams::new(1.0, k, k, 0.0).unwrap();
        let p = p0.with_c3(p0.bar_c3().unwrap() + up);
        let tol = 1e-7;
        let g = gamma_bounds(&p, tol).unwrap();
        prop_assert!((g.gamma_plus + g.gamma_minus).abs() <= 4.0 * tol);
        let (u, l) = extremal_profiles(&p).unwrap();
        for (y, v) in u.y.iter().zip(&u.u).filter(|(y, _)| y.abs() < 0.999) {
            prop_assert!((v + l.eval(-y).unwrap()).abs() < 1e-6);
        }
        let (z, _) = integrate_ivp(&SolveRequest::new(p, 0.0, 0.0)).unwrap();
        for (y, v) in z.y.iter().zip(&z.u).filter(|(y, _)| y.abs() < 0.999) {
            prop_assert!((v + z.eval(-y).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn foliation_is_monotone(k1 in -0.5f64..3.0, k2 in -0.5f64..3.0, up in 0.5f64..4.0) {
        let p0 = FlowParams::new(1.0, k1, k2, 0.0).unwrap();
        let p = p0.with_c3(p0.bar_c3().unwrap() + up);
        let leaves = foliation(&p, 4).unwrap();
        for w in leaves.windows(2) {
            for (y, v) in w[0].y.iter().zip(&w[0].u) {
                if y.abs() < 0.999 {
                    prop_assert!(*v < w[1].eval(*y).unwrap());
                }
            }
        }
    }
}

#[test]
fn single_precision_solves() {
    let p = FlowParams::new(1.0f32, 0.0, 0.0, 0.5).unwrap();
    let g = gamma_bounds(&p, 1e-4).unwrap();
    assert!((g.gamma_plus - 2.188_44).abs() < 1e-3);
    let (prof, c) = integrate_ivp(&SolveRequest::new(p, 0.0, 0.5)).unwrap();
    assert_eq!(c.class, ClassKind::Global);
    assert!(prof.max_residual(-0.9, 0.9) < 1e-2);
}
