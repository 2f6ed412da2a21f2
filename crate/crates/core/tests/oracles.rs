//! Reference values from independent computations (quadrature, direct
//! summation, exact arithmetic) and the documented examples.

use homsol::classify::{
    asymptotic_indicators, extremal_profiles, foliation, gamma_bounds, singularity_type, SingKind,
};
use homsol::closedform::{
    critical_profile, elliptic_profile, landau_profile, one_sing_profile, Alpha, ClosedForm,
};
use homsol::liouville::{
    landau_for_linear, liouville_residual, liouville_velocity, meridian_variance, ChartGrid,
    MeromorphicSpec, SpherePoint,
};
use homsol::params::{CaseLabel, Endpoint, FlowParams};
use homsol::riccati::{
    boundary_limit, hypergeom_rep, integrate_ivp, linear_rep, ClassKind, SolveRequest,
};
use homsol::specfun::{ellip_e, ellip_k, hyp2f1, hyp2f1_complex};
use homsol::viscosity::{extremal_limit_sweep, interior_limit_sweep};
use homsol::{Error, FlowParams64};
use num_complex::Complex;

/// Composite 16-point Gauss-Legendre on `n` panels.
fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    const X: [f64; 8] = [
        0.0950125098376374,
        0.2816035507792589,
        0.4580167776572274,
        0.6178762444026438,
        0.7554044083550030,
        0.8656312023878318,
        0.9445750230732326,
        0.9894009349916499,
    ];
    const W: [f64; 8] = [
        0.1894506104550685,
        0.1826034150449236,
        0.1691565193950025,
        0.1495959888165767,
        0.1246289712555339,
        0.0951585116824928,
        0.0622535239386479,
        0.0271524594117541,
    ];
    let h = (b - a) / n as f64;
    let mut s = 0.0;
    for k in 0..n {
        let m = a + h * (k as f64 + 0.5);
        for i in 0..8 {
            let d = 0.5 * h * X[i];
            s += W[i] * (f(m - d) + f(m + d));
        }
    }
    0.5 * h * s
}

fn k_quad(m: f64) -> f64 {
    quad(
        |t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        std::f64::consts::FRAC_PI_2,
        64,
    )
}

fn e_quad(m: f64) -> f64 {
    quad(
        |t| (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        std::f64::consts::FRAC_PI_2,
        64,
    )
}

fn p(nu: f64, c1: f64, c2: f64, c3: f64) -> FlowParams64 {
    FlowParams::new(nu, c1, c2, c3).unwrap()
}

#[test]
fn elliptic_integrals_match_quadrature() {
    // frozen from the quadrature below
    assert!((ellip_k(0.5f64).unwrap() - 1.854_074_677_301_372).abs() < 1e-13);
    assert!((ellip_e(0.5f64).unwrap() - 1.350_643_881_047_675_5).abs() < 1e-13);
    for m in [0.0, 0.1, 0.5, 0.9, 0.99] {
        assert!((ellip_k(m).unwrap() - k_quad(m)).abs() < 1e-12, "K({m})");
        assert!((ellip_e(m).unwrap() - e_quad(m)).abs() < 1e-12, "E({m})");
    }
}

#[test]
fn hypergeometric_matches_euler_integral() {
    // 2F1(a, 1/2; 1; z) = (2 / pi) int_0^{pi/2} (1 - z sin^2 u)^{-a} du
    let euler = |a: f64, z: f64| {
        2.0 / std::f64::consts::PI
            * quad(
                |u| (1.0 - z * u.sin().powi(2)).powf(-a),
                0.0,
                std::f64::consts::FRAC_PI_2,
                64,
            )
    };
    assert!((hyp2f1(0.5f64, 0.5, 1.0, 0.5).unwrap() - 1.180_340_599_016_096).abs() < 1e-12);
    for (a, z) in [
        (0.5, 0.5),
        (1.3, 0.2),
        (1.3, 0.9),
        (-0.7, 0.75),
        (2.2, 0.95),
    ] {
        let v = hyp2f1(a, 0.5, 1.0, z).unwrap();
        let r = euler(a, z);
        assert!(
            (v - r).abs() < 1e-10 * r.abs().max(1.0),
            "a={a} z={z}: {v} vs {r}"
        );
    }
}

#[test]
fn conjugate_parameters_match_direct_sum() {
    let a = Complex::new(0.4, 1.3);
    let (c, z) = (1.7, 0.3);
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..400 {
        let nf = n as f64;
        term = term * (a + nf) * (a.conj() + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
    }
    let v = hyp2f1_complex(a, a.conj(), c, z).unwrap();
    assert!((v - sum).norm() < 1e-13 && v.im.abs() < 1e-13);
}

#[test]
fn paper_parameter_values() {
    for ((c1, c2), want) in [
        ((0.0, 0.0), -4.0),
        ((-1.0, 8.0), -7.5),
        ((8.0, -1.0), -7.5),
        ((-1.0, -1.0), 0.0),
    ] {
        assert!((p(1.0, c1, c2, 0.0).bar_c3().unwrap() - want).abs() < 1e-12);
    }
    for ((c1, c2, c3), want) in [
        ((0.0, 0.0, 0.5), [0.0, 4.0, -4.0, 0.0]),
        ((-1.0, 8.0, -1.5), [2.0, 2.0, -8.0, 4.0]),
        ((8.0, -1.0, -1.5), [-4.0, 8.0, -2.0, -2.0]),
    ] {
        let t = p(1.0, c1, c2, c3).tau_values().unwrap();
        let got = [t.tau1, t.tau2, t.tau1p, t.tau2p];
        for i in 0..4 {
            assert!((got[i] - want[i]).abs() < 1e-12);
        }
    }
    let q = p(1.0, 25.0 / 9.0, 1.0 / 9.0, -2.0).poly_coeffs();
    for (g, w) in q.iter().zip([8.0 / 9.0, -8.0 / 3.0, 2.0]) {
        assert!((g - w).abs() < 1e-12);
    }
}

#[test]
fn case_labels() {
    assert_eq!(p(1.0, 0.0, 0.0, 0.5).classify_case(), CaseLabel::Case1);
    assert_eq!(p(1.0, -1.0, -1.0, 0.5).classify_case(), CaseLabel::Case4);
    assert_eq!(
        p(1.0, 25.0 / 9.0, 1.0 / 9.0, -2.0).classify_case(),
        CaseLabel::Case1
    );
    assert_eq!(p(1.0, 0.0, 0.0, -4.0).classify_case(), CaseLabel::Case5);
    assert_eq!(p(1.0, 0.0, 0.0, -12.0).classify_case(), CaseLabel::Case6);
}

#[test]
fn gamma_intervals() {
    let g = gamma_bounds(&p(1.0, 0.0, 0.0, 0.0), 1e-7).unwrap();
    assert!((g.gamma_minus + 2.0).abs() < 1e-6 && (g.gamma_plus - 2.0).abs() < 1e-6);
    let g0 = ellip_k(0.5f64).unwrap() / (2.0 * ellip_e(0.5).unwrap() - ellip_k(0.5).unwrap());
    let g = gamma_bounds(&p(1.0, 0.0, 0.0, 0.5), 1e-7).unwrap();
    assert!((g.gamma_plus - g0).abs() < 1e-6 && (g.gamma_minus + g0).abs() < 1e-6);
    let g = gamma_bounds(&p(1.0, 0.0, 0.0, -4.0), 1e-6).unwrap();
    assert!(g.width() <= 2e-6 && g.gamma_plus.abs() < 2e-6);
    assert_eq!(
        gamma_bounds(&p(1.0, 0.0, 0.0, -12.0), 1e-6),
        Err(Error::NotInJ)
    );
}

#[test]
fn extremal_endpoint_values() {
    let lim = |pr: &homsol::Profile64, e| boundary_limit(pr, e).unwrap().value;
    for ((c1, c2, c3), up, lo) in [
        ((0.0, 0.0, 0.5), (4.0, 0.0), (0.0, -4.0)),
        ((-1.0, 8.0, -1.5), (2.0, 4.0), (2.0, -8.0)),
        ((8.0, -1.0, -1.5), (8.0, -2.0), (-4.0, -2.0)),
    ] {
        let (u, l) = extremal_profiles(&p(1.0, c1, c2, c3)).unwrap();
        assert!((lim(&u, Endpoint::Minus1) - up.0).abs() < 1e-3);
        assert!((lim(&u, Endpoint::Plus1) - up.1).abs() < 1e-3);
        assert!((lim(&l, Endpoint::Minus1) - lo.0).abs() < 1e-3);
        assert!((lim(&l, Endpoint::Plus1) - lo.1).abs() < 1e-3);
    }
}

#[test]
fn upper_solution_is_the_elliptic_member() {
    let (u, l) = extremal_profiles(&p(1.0, 0.0, 0.0, 0.5)).unwrap();
    let eu = elliptic_profile(Alpha::Finite(0.0)).unwrap();
    let el = elliptic_profile(Alpha::Infinity).unwrap();
    for (y, v) in u.y.iter().zip(&u.u) {
        assert!((v - eu.eval(*y).unwrap()).abs() < 1e-8);
    }
    for (y, v) in l.y.iter().zip(&l.u) {
        assert!((v - el.eval(*y).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn critical_surface_collapses_to_the_linear_profile() {
    let (u, l) = extremal_profiles(&p(1.0, 0.0, 0.0, -4.0)).unwrap();
    let c = critical_profile(1.0, 0.0, 0.0).unwrap();
    for pr in [&u, &l] {
        for (y, v) in pr.y.iter().zip(&pr.u) {
            assert!((v - c.eval(*y).unwrap()).abs() < 1e-6);
            assert!((v + 4.0 * y).abs() < 1e-6);
        }
    }
    assert_eq!(
        foliation(&p(1.0, 0.0, 0.0, -4.0), 3).unwrap_err(),
        Error::CriticalSurface
    );
}

#[test]
fn foliation_of_the_elliptic_family() {
    let leaves = foliation(&p(1.0, 0.0, 0.0, 0.5), 5).unwrap();
    assert_eq!(leaves.len(), 5);
    for w in leaves.windows(2) {
        for (y, v) in w[0].y.iter().zip(&w[0].u) {
            if y.abs() < 0.999 {
                assert!(*v < w[1].eval(*y).unwrap());
            }
        }
    }
    let pair = foliation(&p(1.0, 0.0, 0.0, 0.5), 2).unwrap();
    let (u, l) = extremal_profiles(&p(1.0, 0.0, 0.0, 0.5)).unwrap();
    assert_eq!((&pair[0], &pair[1]), (&l, &u));
}

#[test]
fn singularity_types() {
    let l = landau_profile(1.0f64, 1.0).unwrap();
    for e in [Endpoint::Minus1, Endpoint::Plus1] {
        assert_eq!(singularity_type(&l, e, 1.0).unwrap().kind, SingKind::Type1);
    }
    let prm = p(1.0, 0.0, 0.0, 0.5);
    for g in [-1.5, 0.0, 0.5, 2.0] {
        let (pr, _) = integrate_ivp(&SolveRequest::new(prm, 0.0, g)).unwrap();
        let s = singularity_type(&pr, Endpoint::Minus1, 1.0).unwrap();
        assert_eq!(s.kind, SingKind::Type2);
        assert!((s.log_coefficient.unwrap() + 1.0).abs() < 0.1);
    }
    let (u, l) = extremal_profiles(&prm).unwrap();
    assert_eq!(
        singularity_type(&u, Endpoint::Minus1, 1.0).unwrap().kind,
        SingKind::Type3
    );
    assert_eq!(
        singularity_type(&l, Endpoint::Plus1, 1.0).unwrap().kind,
        SingKind::Type3
    );
    assert_eq!(
        singularity_type(&u, Endpoint::Plus1, 1.0).unwrap().kind,
        SingKind::Type2
    );
}

#[test]
fn indicators() {
    let o = one_sing_profile(1.0f64, 3.0, 0.75).unwrap();
    let i = asymptotic_indicators(&o, Endpoint::Minus1, 1.0).unwrap();
    assert!((i.tau - 3.0).abs() < 1e-3 && i.eta.is_none());
    let l = landau_profile(1.0f64, 1.0).unwrap();
    let i = asymptotic_indicators(&l, Endpoint::Minus1, 1.0).unwrap();
    assert!(i.tau.abs() < 1e-12 && i.eta.is_none());
    let (u, _) = extremal_profiles(&p(1.0, -1.0, 8.0, -1.5)).unwrap();
    let i = asymptotic_indicators(&u, Endpoint::Minus1, 1.0).unwrap();
    assert_eq!((i.tau, i.eta), (2.0, Some(0.0)));
    let (g, _) = integrate_ivp(&SolveRequest::new(p(1.0, -1.0, 8.0, -1.5), 0.0, 0.5)).unwrap();
    let i = asymptotic_indicators(&g, Endpoint::Minus1, 1.0).unwrap();
    assert_eq!((i.tau, i.eta), (2.0, Some(2.0)));
}

#[test]
fn case6_scan_has_every_local_class() {
    // the extremals of this example blow up at y = 0, so a scan from 0 alone
    // only meets A3; A1 and A2 need a shooting point off the equator
    let prm = p(1.0, 0.0, 0.0, -12.0);
    let mut seen = [0usize; 4];
    for (k, yb) in (0..100).flat_map(|k| [-0.5, 0.0, 0.5].map(|yb| (k, yb))) {
        let g = -20.0 + 40.0 * k as f64 / 99.0;
        let (_, c) = integrate_ivp(&SolveRequest::new(prm, yb, g)).unwrap();
        let i = match c.class {
            ClassKind::Global => 0,
            ClassKind::A1 => 1,
            ClassKind::A2 => 2,
            ClassKind::A3 => 3,
        };
        seen[i] += 1;
    }
    assert_eq!(seen[0], 0);
    assert!(seen[1] > 0 && seen[2] > 0 && seen[3] > 0, "{seen:?}");
}

#[test]
fn three_representations_on_an_example() {
    let req = SolveRequest::new(p(1.0, -0.5, 8.0, -6.0), 0.0, 0.7);
    let (a, _) = integrate_ivp(&req).unwrap();
    let (_, b) = linear_rep(&req).unwrap();
    let c = hypergeom_rep(&req).unwrap();
    for (y, v) in c.y.iter().zip(&c.u) {
        assert!((v - a.eval(*y).unwrap()).abs() < 1e-6);
        assert!((v - b.eval(*y).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn closed_forms_against_the_solver() {
    // the Landau member started from its own value at 0 is reproduced
    let f = ClosedForm::Landau {
        nu: 1.0f64,
        gamma: 1.2,
    };
    let (pr, c) = integrate_ivp(&SolveRequest::new(f.params(), 0.0, f.eval(0.0))).unwrap();
    assert_eq!(c.class, ClassKind::Global);
    for (y, v) in pr.y.iter().zip(&pr.u) {
        assert!((v - f.eval(*y)).abs() < 1e-8);
    }
}

#[test]
fn viscosity_example_structure() {
    let c = (25.0 / 9.0, 1.0 / 9.0, -2.0);
    let nus = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let r = interior_limit_sweep(c, std::f64::consts::FRAC_PI_2, &nus, 0.1).unwrap();
    assert!(r.sup_errors_decrease(1.2));
    assert!(r.widths_decrease());
    for w in r.points.windows(2) {
        assert!(w[1].layer.unwrap().width / w[0].layer.unwrap().width < 0.9);
    }
    for pt in &r.points {
        assert!(pt.layer.unwrap().center.abs() < 0.05);
    }
    // V+(0) - V-(0)
    let v = (2.0f64 * p(1.0, c.0, c.1, c.2).p_c(0.0)).sqrt();
    assert!((2.0 * v - 8.0 / 3.0).abs() < 1e-12);
    let e = extremal_limit_sweep(c, &nus, 0.1).unwrap();
    assert!(e.errors_decrease(1.2));
}

#[test]
fn viscosity_rate_for_positive_p() {
    // P_c = 2 on [-1, 1]
    let nus = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let r = extremal_limit_sweep((1.0, 1.0, 0.0), &nus, 0.1).unwrap();
    assert!(r.errors_decrease(1.2));
    for f in [r.fit_plus.unwrap(), r.fit_minus.unwrap()] {
        assert!(f.exponent > 0.8 && f.exponent < 1.2, "{f:?}");
    }
    let single = extremal_limit_sweep((1.0, 1.0, 0.0), &[1.0], 0.1).unwrap();
    let (u, _) = extremal_profiles(&p(1.0, 1.0, 1.0, 0.0)).unwrap();
    let direct = u
        .window(-0.9, 0.9)
        .iter()
        .map(|(_, v)| (v - 2.0).abs())
        .fold(0.0f64, f64::max);
    assert_eq!(single.points[0].err_plus, direct);
}

#[test]
fn liouville_examples() {
    let grid = ChartGrid::uniform(64, 64, 0.1f64).unwrap();
    let specs = [
        MeromorphicSpec::Linear {
            a: Complex::new(1.0, 0.0),
        },
        MeromorphicSpec::Linear {
            a: Complex::new(3.0, 0.0),
        },
        MeromorphicSpec::Power {
            a: Complex::new(1.0, 0.0),
            alpha: 2.0,
        },
        MeromorphicSpec::Exponential {
            a: Complex::new(1.0, 0.0),
            b: Complex::new(0.3, 0.0),
        },
    ];
    for f in &specs {
        assert!(liouville_residual(f, &grid).unwrap() <= 1e-6);
    }
    let g16 = ChartGrid::uniform(32, 16, 0.1).unwrap();
    assert!(meridian_variance(&specs[2], &g16).unwrap() <= 1e-8);
    assert!(meridian_variance(&specs[3], &g16).unwrap() >= 1e-2);

    let a = Complex::new(1.2, -0.9);
    let lf = landau_for_linear(a).unwrap();
    for k in 1..40 {
        let th = std::f64::consts::PI * k as f64 / 40.0;
        let v = liouville_velocity(
            &MeromorphicSpec::Linear { a },
            &SpherePoint::new(th, 0.4).unwrap(),
        )
        .unwrap();
        assert!((v.theta * th.sin() - lf.eval(th.cos())).abs() < 1e-6);
        assert!(v.phi.abs() < 1e-12);
    }
}
