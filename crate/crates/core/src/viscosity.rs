//! Vanishing-viscosity sweeps: distance of viscous profiles from the Euler
//! branches `V± = ±sqrt(2 P_c)` as `nu -> 0`.
//!
//! [`extremal_limit_sweep`] follows the upper and lower solutions, which
//! tend to `V+` and `V-` on the whole sphere. [`interior_limit_sweep`]
//! follows the leaf whose zero crossing sits at `cos(theta0)`; it tends to
//! `V+` above the crossing and `V-` below it, with a transition layer at the
//! crossing.
//!
//! `V±` have corner points at the zeros of `P_c`, where the viscous
//! profiles differ from them by `O(sqrt(nu))` instead of `O(nu)`. The
//! asserted window errors exclude `epsilon`-neighbourhoods of those zeros;
//! the errors over the full windows are reported alongside.

use rayon::prelude::*;

use crate::classify::{extremal_profiles, linfit};
use crate::params::FlowParams;
use crate::profile::{standard_grid, Profile};
use crate::riccati::{integrate_ivp, SolveRequest};
use crate::{Error, Real, Result};

/// Interior grid size for interior-leaf sweeps, fine enough to resolve a
/// transition layer of width `~ nu` for `nu >= 1/128`.
pub const LAYER_GRID_INTERIOR: usize = 1901;

/// Transition layer of an interior leaf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer<T> {
    /// Zero crossing of `U_nu`.
    pub center: T,
    /// Extent of the interval around `center` on which `|U_nu| < threshold`.
    pub width: T,
    pub threshold: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub nu: T,
    /// Sup gap to `V+` over the window, excluding corners of `V±`.
    pub err_plus: T,
    /// Sup gap to `V-` over the window, excluding corners of `V±`.
    pub err_minus: T,
    /// Same gaps over the full windows.
    pub raw_err_plus: T,
    pub raw_err_minus: T,
    /// Sup gaps of the first derivatives (not used for rate fitting).
    pub c1_err_plus: T,
    pub c1_err_minus: T,
    pub layer: Option<Layer<T>>,
}

/// `err ~ constant * nu^exponent` by least squares in log-log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit<T> {
    pub exponent: T,
    pub constant: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport<T> {
    pub c: (T, T, T),
    pub epsilon: T,
    /// Zero crossing for interior sweeps, `None` for extremal sweeps.
    pub crossing: Option<T>,
    /// Zeros of `P_c` in `[-1, 1]` excluded from the windows.
    pub corners: Vec<T>,
    /// One entry per requested `nu`, in input order.
    pub points: Vec<SweepPoint<T>>,
    pub fit_plus: Option<RateFit<T>>,
    pub fit_minus: Option<RateFit<T>>,
    /// Fit of `max(err_plus, err_minus)`, the sup gap to the piecewise
    /// limit over both windows.
    pub fit_sup: Option<RateFit<T>>,
}

impl<T: Real> SweepReport<T> {
    /// Points ordered by decreasing `nu`.
    fn descending(&self) -> Vec<&SweepPoint<T>> {
        let mut v: Vec<&SweepPoint<T>> = self.points.iter().collect();
        v.sort_by(|a, b| b.nu.partial_cmp(&a.nu).unwrap());
        v
    }

    /// Errors do not grow by more than `blip` from one `nu` to the next
    /// smaller one, and the last error is below the first.
    pub fn errors_decrease(&self, blip: T) -> bool {
        let d = self.descending();
        let check = |f: &dyn Fn(&SweepPoint<T>) -> T| {
            d.windows(2).all(|w| f(w[1]) <= blip * f(w[0]))
                && d.len() >= 2
                && f(d[d.len() - 1]) < f(d[0])
        };
        check(&|p| p.err_plus) && check(&|p| p.err_minus)
    }

    /// As [`errors_decrease`](Self::errors_decrease) for the sup gap over
    /// both windows.
    pub fn sup_errors_decrease(&self, blip: T) -> bool {
        let d = self.descending();
        let f = |p: &SweepPoint<T>| p.err_plus.max(p.err_minus);
        d.len() >= 2
            && d.windows(2).all(|w| f(w[1]) <= blip * f(w[0]))
            && f(d[d.len() - 1]) < f(d[0])
    }

    /// Layer widths strictly decrease with `nu`.
    pub fn widths_decrease(&self) -> bool {
        let d = self.descending();
        d.windows(2).all(|w| match (w[0].layer, w[1].layer) {
            (Some(a), Some(b)) => b.width < a.width,
            _ => false,
        })
    }
}

/// Zeros of `P_c` in `[-1, 1]`, with `P_c >= 0` required throughout.
fn euler_corners<T: Real>(p: &FlowParams<T>) -> Result<Vec<T>> {
    let [a0, a1, a2] = p.poly_coeffs();
    let one = T::one();
    let mut cand = vec![-one, one];
    if a2 != T::zero() {
        let v = -a1 / (a2 + a2);
        if v > -one && v < one {
            cand.push(v);
        }
    }
    let scale = a0.abs() + a1.abs() + a2.abs();
    let tiny = T::lit(1e-12) * scale.max(one);
    let mut corners = Vec::new();
    for &y in &cand {
        let v = p.p_c(y);
        if v < -tiny {
            return Err(Error::NotEulerAdmissible(format!("P_c({y}) = {v} < 0")));
        }
        if v <= tiny {
            corners.push(y);
        }
    }
    corners.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(corners)
}

/// `(V, V')` of the branch with sign `sg`.
fn euler_branch<T: Real>(p: &FlowParams<T>, sg: T, y: T) -> (T, T) {
    let v = (T::lit(2.0) * p.p_c(y).max(T::zero())).sqrt();
    let dv = if v > T::zero() {
        p.p_c_prime(y) / v
    } else {
        T::zero()
    };
    (sg * v, sg * dv)
}

/// `(sup |U - V|, sup |U' - V'|)` over grid nodes in `[lo, hi]`, optionally
/// skipping nodes within `eps` of a corner.
fn gap<T: Real>(
    prof: &Profile<T>,
    slopes: &[T],
    sg: T,
    lo: T,
    hi: T,
    skip: Option<(&[T], T)>,
) -> (T, T) {
    let mut e0 = T::zero();
    let mut e1 = T::zero();
    for i in 0..prof.len() {
        let y = prof.y[i];
        if y < lo || y > hi {
            continue;
        }
        if let Some((cs, eps)) = skip {
            if cs.iter().any(|&c| (y - c).abs() < eps) {
                continue;
            }
        }
        let (v, dv) = euler_branch(&prof.params, sg, y);
        e0 = e0.max((prof.u[i] - v).abs());
        e1 = e1.max((slopes[i] - dv).abs());
    }
    (e0, e1)
}

fn fit<T: Real>(nu: &[T], err: &[T]) -> Option<RateFit<T>> {
    if nu.len() < 2 || err.iter().any(|&e| !(e > T::zero())) {
        return None;
    }
    let x: Vec<T> = nu.iter().map(|v| v.ln()).collect();
    let v: Vec<T> = err.iter().map(|e| e.ln()).collect();
    let (a, m) = linfit(&x, &v);
    Some(RateFit {
        exponent: m,
        constant: a.exp(),
    })
}

fn check_inputs<T: Real>(nu_list: &[T], epsilon: T) -> Result<()> {
    if nu_list.is_empty() || nu_list.iter().any(|&n| !(n > T::zero())) {
        return Err(Error::Domain("viscosities must be positive".into()));
    }
    if !(epsilon > T::zero() && epsilon < T::lit(0.5)) {
        return Err(Error::Domain("epsilon must lie in (0, 0.5)".into()));
    }
    Ok(())
}

fn report<T: Real>(
    c: (T, T, T),
    epsilon: T,
    crossing: Option<T>,
    corners: Vec<T>,
    points: Vec<SweepPoint<T>>,
) -> SweepReport<T> {
    let nu: Vec<T> = points.iter().map(|p| p.nu).collect();
    let ep: Vec<T> = points.iter().map(|p| p.err_plus).collect();
    let em: Vec<T> = points.iter().map(|p| p.err_minus).collect();
    let es: Vec<T> = points.iter().map(|p| p.err_plus.max(p.err_minus)).collect();
    SweepReport {
        c,
        epsilon,
        crossing,
        corners,
        fit_plus: fit(&nu, &ep),
        fit_minus: fit(&nu, &em),
        fit_sup: fit(&nu, &es),
        points,
    }
}

/// Gaps of the upper and lower solutions to `V+` and `V-` on
/// `[-1 + epsilon, 1 - epsilon]` for each viscosity.
pub fn extremal_limit_sweep<T: Real>(
    c: (T, T, T),
    nu_list: &[T],
    epsilon: T,
) -> Result<SweepReport<T>> {
    check_inputs(nu_list, epsilon)?;
    let corners = euler_corners(&FlowParams::new(T::one(), c.0, c.1, c.2)?)?;
    let one = T::one();
    let (lo, hi) = (-one + epsilon, one - epsilon);
    let points = nu_list
        .par_iter()
        .map(|&nu| {
            let p = FlowParams::new(nu, c.0, c.1, c.2)?;
            let (up, low) = extremal_profiles(&p)?;
            let su = up.slopes();
            let sl = low.slopes();
            let skip = Some((corners.as_slice(), epsilon));
            let (ep, c1p) = gap(&up, &su, one, lo, hi, skip);
            let (em, c1m) = gap(&low, &sl, -one, lo, hi, skip);
            let (rp, _) = gap(&up, &su, one, lo, hi, None);
            let (rm, _) = gap(&low, &sl, -one, lo, hi, None);
            Ok(SweepPoint {
                nu,
                err_plus: ep,
                err_minus: em,
                raw_err_plus: rp,
                raw_err_minus: rm,
                c1_err_plus: c1p,
                c1_err_minus: c1m,
                layer: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report(c, epsilon, None, corners, points))
}

/// Endpoint of the layer on one side of `center`: the first point where
/// `|U|` reaches `h`, located by bisection on the Hermite interpolant.
fn layer_edge<T: Real>(prof: &Profile<T>, slopes: &[T], ic: usize, h: T, step: isize) -> Option<T> {
    let mut i = ic as isize;
    loop {
        let j = i + step;
        if j < 0 || j as usize >= prof.len() {
            return None;
        }
        if prof.u[j as usize].abs() >= h {
            let (mut a, mut b) = (prof.y[i as usize], prof.y[j as usize]);
            for _ in 0..60 {
                let m = (a + b) * T::lit(0.5);
                let (u, _) = prof.eval_with_slopes(slopes, m)?;
                if u.abs() < h {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some((a + b) * T::lit(0.5));
        }
        i = j;
    }
}

/// Gaps of the leaf crossing zero at `cos(theta0)` to `V+` above and `V-`
/// below the crossing, and its transition layer, for each viscosity.
///
/// The leaf is the solution with `U(cos(theta0)) = 0`; it must be global.
/// The layer threshold is half the one-sided jump `sqrt(2 P_c(cos theta0))`.
pub fn interior_limit_sweep<T: Real>(
    c: (T, T, T),
    theta0: T,
    nu_list: &[T],
    epsilon: T,
) -> Result<SweepReport<T>> {
    check_inputs(nu_list, epsilon)?;
    if !(theta0 > T::zero() && theta0 < T::PI()) {
        return Err(Error::Domain("theta0 must lie in (0, pi)".into()));
    }
    let p1 = FlowParams::new(T::one(), c.0, c.1, c.2)?;
    let corners = euler_corners(&p1)?;
    let y0 = theta0.cos();
    let one = T::one();
    let half = T::lit(0.5);
    let h = half * (T::lit(2.0) * p1.p_c(y0)).sqrt();
    if !(h > T::zero()) {
        return Err(Error::SelectionFailure);
    }
    let grid = standard_grid::<T>(LAYER_GRID_INTERIOR);
    let points = nu_list
        .par_iter()
        .map(|&nu| {
            let p = FlowParams::new(nu, c.0, c.1, c.2)?;
            let req = SolveRequest::new(p, y0, T::zero()).with_grid(grid.clone());
            let (prof, _) = integrate_ivp(&req)?;
            if !prof.domain.is_global() {
                return Err(Error::SelectionFailure);
            }
            let sl = prof.slopes();
            let skip = Some((corners.as_slice(), epsilon));
            let (ep, c1p) = gap(&prof, &sl, one, y0 + epsilon, one - epsilon, skip);
            let (em, c1m) = gap(&prof, &sl, -one, -one + epsilon, y0 - epsilon, skip);
            let (rp, _) = gap(&prof, &sl, one, y0 + epsilon, one - epsilon, None);
            let (rm, _) = gap(&prof, &sl, -one, -one + epsilon, y0 - epsilon, None);
            let ic = prof
                .y
                .iter()
                .position(|&y| y == y0)
                .ok_or(Error::SelectionFailure)?;
            let center = prof.y[ic];
            let layer = match (
                layer_edge(&prof, &sl, ic, h, -1),
                layer_edge(&prof, &sl, ic, h, 1),
            ) {
                (Some(a), Some(b)) => Some(Layer {
                    center,
                    width: b - a,
                    threshold: h,
                }),
                _ => None,
            };
            Ok(SweepPoint {
                nu,
                err_plus: ep,
                err_minus: em,
                raw_err_plus: rp,
                raw_err_minus: rm,
                c1_err_plus: c1p,
                c1_err_minus: c1m,
                layer,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report(c, epsilon, Some(y0), corners, points))
}
