//! Global solutions for fixed coefficients: the admissible interval of
//! `gamma = U(0)`, the extremal (upper and lower) solutions, the foliation
//! between them, and the singularity type at a pole.

use crate::params::{CaseLabel, Endpoint, FlowParams};
use crate::profile::Profile;
use crate::riccati::{
    anchored_profile, boundary_limit, integrate_ivp, reaches_endpoint, RiccatiTol, SolveRequest,
};
use crate::{Error, Real, Result};

/// `[gamma_minus, gamma_plus]`, each end accurate to `tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaInterval<T> {
    pub gamma_minus: T,
    pub gamma_plus: T,
    pub tol: T,
}

impl<T: Real> GammaInterval<T> {
    pub fn width(&self) -> T {
        self.gamma_plus - self.gamma_minus
    }

    pub fn contains(&self, g: T) -> bool {
        g >= self.gamma_minus && g <= self.gamma_plus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingKind {
    /// `|u|` bounded near the pole.
    Type1,
    /// `|u|` grows like `|ln |x'||`.
    Type2,
    /// `|u|` grows like `1 / |x'|`.
    Type3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityType<T> {
    pub kind: SingKind,
    /// `lim |u| / ln |x'|` (Type 2).
    pub log_coefficient: Option<T>,
    /// `lim |x'| |u|` (Type 3).
    pub order_coefficient: Option<T>,
}

/// Endpoint value `tau` and, at a double root, `eta = lim (U - 2 nu) ln|x'|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Indicators<T> {
    pub tau: T,
    pub eta: Option<T>,
    /// Regression estimate before identification with `0` or `2 nu`.
    pub eta_raw: Option<T>,
}

/// Threshold on `|U(pole)|` separating Type 3 from the bounded-`U` types.
pub const TYPE3_THRESHOLD: f64 = 1e-3;
/// Threshold on the log-fit slope separating Type 2 from Type 1.
pub const TYPE2_THRESHOLD: f64 = 1e-3;
/// Largest relative spread of local slopes accepted for a Type 2 fit.
pub const FIT_SPREAD: f64 = 0.1;

fn require_j<T: Real>(p: &FlowParams<T>) -> Result<()> {
    if p.in_j() {
        Ok(())
    } else {
        Err(Error::NotInJ)
    }
}

/// `(pred(lo), pred(hi)) = (false, true)` bisected to width `tol`.
fn bisect<T: Real>(
    mut lo: T,
    mut hi: T,
    tol: T,
    pred: impl Fn(T) -> Result<bool>,
) -> Result<(T, T)> {
    let half = T::lit(0.5);
    while (hi - lo).abs() > tol {
        let mid = (lo + hi) * half;
        if mid == lo || mid == hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Brackets the switch of a monotone predicate on `[-b, b]` with a 20-point
/// scan, widening `b` when the switch lies outside. `rising` means false
/// below the switch and true above.
fn scan_bracket<T: Real>(b0: T, rising: bool, pred: &impl Fn(T) -> Result<bool>) -> Result<(T, T)> {
    let n = 20;
    let mut b = b0;
    for _ in 0..12 {
        let xs: Vec<T> = (0..n)
            .map(|i| -b + (b + b) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1))
            .collect();
        let vals: Vec<bool> = xs.iter().map(|&x| pred(x)).collect::<Result<_>>()?;
        let target: Vec<bool> = vals.iter().map(|&v| v == rising).collect();
        // first index where the predicate has switched
        let k = target.iter().position(|&v| v);
        match k {
            Some(0) | None => {
                b = b + b;
                continue;
            }
            Some(k) => {
                if target[k..].iter().any(|&v| !v) {
                    return Err(Error::Inconclusive(
                        "reachability is not monotone in gamma".into(),
                    ));
                }
                return Ok((xs[k - 1], xs[k]));
            }
        }
    }
    Err(Error::NoConvergence(
        "no bracket for the gamma bound".into(),
    ))
}

/// The interval of `gamma = U(0)` giving global solutions, by bisection on
/// the reachability of each pole from `y = 0`. Bounds belonging to a double
/// endpoint root (`c1 = -nu^2` or `c2 = -nu^2`) come from the extremal
/// solution instead.
pub fn gamma_bounds<T: Real>(params: &FlowParams<T>, tol: T) -> Result<GammaInterval<T>> {
    require_j(params)?;
    if !(tol > T::zero()) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let rt = RiccatiTol::default();
    let ts = params.tau_values()?;
    let b = ts.tau2.abs() + ts.tau1p.abs() + T::lit(4.0) * params.nu;
    // At a double endpoint root nearby solutions separate only like 1 / |ln t|
    // and reachability cannot be resolved; the extremal solution is then
    // taken from its anchored integration, which is unique.
    let anchored_at = |end: Endpoint| -> Result<T> {
        anchored_profile(params, end, &rt, None)?
            .eval(T::zero())
            .ok_or(Error::EndpointNotReached)
    };
    let gamma_minus = if params.s2() == T::zero() {
        anchored_at(Endpoint::Plus1)?
    } else {
        // forward reach: false below gamma_minus, true above
        let fwd = |g: T| reaches_endpoint(params, T::zero(), g, Endpoint::Plus1, &rt);
        let (lo, hi) = scan_bracket(b, true, &fwd)?;
        let (lo, hi) = bisect(lo, hi, tol, fwd)?;
        (lo + hi) * T::lit(0.5)
    };
    let gamma_plus = if params.s1() == T::zero() {
        anchored_at(Endpoint::Minus1)?
    } else {
        // backward reach: true below gamma_plus, false above
        let bwd = |g: T| reaches_endpoint(params, T::zero(), g, Endpoint::Minus1, &rt).map(|r| !r);
        let (lo, hi) = scan_bracket(b, true, &bwd)?;
        let (lo, hi) = bisect(lo, hi, tol, bwd)?;
        (lo + hi) * T::lit(0.5)
    };
    Ok(GammaInterval {
        gamma_minus,
        gamma_plus: gamma_plus.max(gamma_minus),
        tol,
    })
}

/// Splices two profiles on a common grid at `y = 0`.
fn splice<T: Real>(below: &Profile<T>, above: &Profile<T>) -> Profile<T> {
    let mut y = Vec::new();
    let mut u = Vec::new();
    let mut du = Vec::new();
    let db = below.slopes();
    let da = above.slopes();
    for i in 0..below.len() {
        if below.y[i] <= T::zero() {
            y.push(below.y[i]);
            u.push(below.u[i]);
            du.push(db[i]);
        }
    }
    for i in 0..above.len() {
        if above.y[i] > T::zero() {
            y.push(above.y[i]);
            u.push(above.u[i]);
            du.push(da[i]);
        }
    }
    Profile {
        params: below.params,
        y,
        u,
        du: Some(du),
        domain: crate::profile::Domain::global(),
    }
}

/// Upper and lower solutions. Each starts from the pole where it sits on
/// the repelling root (`-1` for the upper, `+1` for the lower) and is
/// integrated away from it. On the critical surface both coincide and the
/// result is spliced at `y = 0` from the two anchored integrations.
pub fn extremal_profiles<T: Real>(params: &FlowParams<T>) -> Result<(Profile<T>, Profile<T>)> {
    require_j(params)?;
    let rt = RiccatiTol::default();
    let up = anchored_profile(params, Endpoint::Minus1, &rt, None)?;
    let lo = anchored_profile(params, Endpoint::Plus1, &rt, None)?;
    if params.classify_case() == CaseLabel::Case5 {
        let s = splice(&up, &lo);
        return Ok((s.clone(), s));
    }
    Ok((up, lo))
}

/// `n` global solutions with `U(0)` equally spaced over the gamma interval;
/// the first and last are the lower and upper solutions.
pub fn foliation<T: Real>(params: &FlowParams<T>, n: usize) -> Result<Vec<Profile<T>>> {
    require_j(params)?;
    if params.classify_case() == CaseLabel::Case5 {
        return Err(Error::CriticalSurface);
    }
    if n < 2 {
        return Err(Error::Domain("foliation needs at least two leaves".into()));
    }
    let (up, lo) = extremal_profiles(params)?;
    let g_lo = lo.eval(T::zero()).ok_or(Error::EndpointNotReached)?;
    let g_up = up.eval(T::zero()).ok_or(Error::EndpointNotReached)?;
    let mut out = Vec::with_capacity(n);
    out.push(lo);
    for k in 1..n - 1 {
        let s = T::from_usize_lossy(k) / T::from_usize_lossy(n - 1);
        let g = g_lo + (g_up - g_lo) * s;
        let (prof, _) = integrate_ivp(&SolveRequest::new(*params, T::zero(), g))?;
        out.push(prof);
    }
    out.push(up);
    Ok(out)
}

/// Least-squares line `v = a + m x`; returns `(a, m)`.
pub(crate) fn linfit<T: Real>(x: &[T], v: &[T]) -> (T, T) {
    let n = T::from_usize_lossy(x.len());
    let mx = x.iter().fold(T::zero(), |a, &b| a + b) / n;
    let mv = v.iter().fold(T::zero(), |a, &b| a + b) / n;
    let mut sxx = T::zero();
    let mut sxv = T::zero();
    for i in 0..x.len() {
        sxx = sxx + (x[i] - mx) * (x[i] - mx);
        sxv = sxv + (x[i] - mx) * (v[i] - mv);
    }
    let m = sxv / sxx;
    (mv - m * mx, m)
}

/// Samples `(ln|x'|, u_r)` near `end` with `|x'|` in `[lo, hi]`.
fn log_samples<T: Real>(prof: &Profile<T>, end: Endpoint, lo: T, hi: T) -> Vec<(T, T)> {
    prof.tail(end, T::lit(0.05))
        .into_iter()
        .filter_map(|(t, _, du)| {
            let xp = (t * (T::lit(2.0) - t)).sqrt();
            (xp >= lo && xp <= hi).then(|| (xp.ln(), du))
        })
        .collect()
}

/// Singularity type at `end` from the endpoint value and the growth of the
/// recovered field on the sphere.
///
/// With a vanishing endpoint value `u_theta` stays bounded and `u_r` is
/// affine in `ln|x'|` to leading order. The slope `m` is fitted over
/// `|x'|` in `[1e-5, 1e-2]` and `log_coefficient = -|m|`, the limit of
/// `|u| / ln|x'|`.
pub fn singularity_type<T: Real>(
    prof: &Profile<T>,
    end: Endpoint,
    nu: T,
) -> Result<SingularityType<T>> {
    if !(nu > T::zero()) {
        return Err(Error::Domain("viscosity must be positive".into()));
    }
    let tau = boundary_limit(prof, end)?.value;
    if tau.abs() >= T::lit(TYPE3_THRESHOLD) {
        return Ok(SingularityType {
            kind: SingKind::Type3,
            log_coefficient: None,
            order_coefficient: Some(tau.abs()),
        });
    }
    let pts = log_samples(prof, end, T::lit(1e-5), T::lit(1e-2));
    if pts.len() < 8 {
        return Err(Error::GridTooCoarse(
            "too few samples for the log fit".into(),
        ));
    }
    let xs: Vec<T> = pts.iter().map(|p| p.0).collect();
    let vs: Vec<T> = pts.iter().map(|p| p.1).collect();
    let (_, m) = linfit(&xs, &vs);
    if m.abs() <= T::lit(TYPE2_THRESHOLD) {
        return Ok(SingularityType {
            kind: SingKind::Type1,
            log_coefficient: None,
            order_coefficient: None,
        });
    }
    // local slopes over successive thirds of the window
    let k = pts.len() / 3;
    let mut local = Vec::new();
    for c in 0..3 {
        let s = &pts[c * k..(c + 1) * k];
        let (_, mc) = linfit(
            &s.iter().map(|p| p.0).collect::<Vec<_>>(),
            &s.iter().map(|p| p.1).collect::<Vec<_>>(),
        );
        local.push(mc);
    }
    let hi = local.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
    let lo = local.iter().fold(T::infinity(), |a, &b| a.min(b));
    if (hi - lo) / m.abs() > T::lit(FIT_SPREAD) {
        return Err(Error::Inconclusive(format!(
            "log-fit slopes spread over [{lo}, {hi}]"
        )));
    }
    Ok(SingularityType {
        kind: SingKind::Type2,
        log_coefficient: Some(-m.abs()),
        order_coefficient: None,
    })
}

/// `tau = lim |x'| u_theta` at `end` and, when `tau = 2 nu` (by mirror
/// symmetry `-2 nu` at `+1`), `eta = lim (U - 2 nu) ln|x'|`.
///
/// `eta` is estimated by regressing `(U - 2 nu) ln|x'|` against
/// `1 / ln|x'|` over the deep tail and taking the intercept; it is then
/// identified with the nearer of `0` and `2 nu`.
pub fn asymptotic_indicators<T: Real>(
    prof: &Profile<T>,
    end: Endpoint,
    nu: T,
) -> Result<Indicators<T>> {
    let tau = boundary_limit(prof, end)?.value;
    let k = match end {
        Endpoint::Minus1 => T::one(),
        Endpoint::Plus1 => -T::one(),
    };
    let two_nu = nu + nu;
    if (k * tau - two_nu).abs() > T::lit(crate::riccati::SNAP_TOL) {
        return Ok(Indicators {
            tau,
            eta: None,
            eta_raw: None,
        });
    }
    let tail: Vec<(T, T)> = prof
        .tail(end, T::lit(1e-4))
        .into_iter()
        .map(|(t, u, _)| {
            let l = (t * (T::lit(2.0) - t)).sqrt().ln();
            (T::one() / l, (k * u - two_nu) * l)
        })
        .collect();
    if tail.len() < 8 {
        return Err(Error::GridTooCoarse("too few tail samples for eta".into()));
    }
    let (a, _) = linfit(
        &tail.iter().map(|p| p.0).collect::<Vec<_>>(),
        &tail.iter().map(|p| p.1).collect::<Vec<_>>(),
    );
    let eta = if a.abs() <= (a - two_nu).abs() {
        T::zero()
    } else {
        two_nu
    };
    if (a - eta).abs() > T::lit(0.25) * two_nu {
        return Err(Error::Inconclusive(format!(
            "eta estimate {a} is not near 0 or 2 nu"
        )));
    }
    Ok(Indicators {
        tau,
        eta: Some(eta),
        eta_raw: Some(a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_is_exact_on_lines() {
        let x = [0.0f64, 1.0, 2.0, 3.0];
        let v: Vec<f64> = x.iter().map(|t| 2.0 - 0.5 * t).collect();
        let (a, m) = linfit(&x, &v);
        assert!((a - 2.0).abs() < 1e-14 && (m + 0.5).abs() < 1e-14);
    }

    #[test]
    fn case6_is_rejected() {
        let p = FlowParams::new(1.0f64, 0.0, 0.0, -12.0).unwrap();
        assert_eq!(gamma_bounds(&p, 1e-6), Err(Error::NotInJ));
        assert!(matches!(extremal_profiles(&p), Err(Error::NotInJ)));
    }
}
