use super::ivp::edge;
use super::{Direction, RiccatiTol, SolveRequest};
use crate::error::domain;
use crate::ode::{integrate_to, Tolerances};
use crate::params::{Endpoint, FlowParams};
use crate::profile::{standard_grid, Domain, EndState, Profile, DEFAULT_INTERIOR};
use crate::{Real, Result};

/// Fundamental solutions of `2 nu^2 (1 - y^2)^2 w'' = P_c w` sampled on the
/// profile grid, normalised by `w1(ybar) = 1, w1'(ybar) = 0` and
/// `w2(ybar) = 0, w2'(ybar) = 1`. The combination `w = w1 + mu w2` (a
/// multiple of `D w1 + w2`) generates the Riccati solution.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRep<T> {
    pub y: Vec<T>,
    pub w1: Vec<T>,
    pub w1p: Vec<T>,
    pub w2: Vec<T>,
    pub w2p: Vec<T>,
    pub mu: T,
    /// `D = 1 / mu`; `None` when `mu = 0`.
    pub d: Option<T>,
    /// Zeros of `w`, in increasing order.
    pub zeros: Vec<T>,
}

impl<T: Real> LinearRep<T> {
    pub fn w(&self) -> Vec<T> {
        self.w1
            .iter()
            .zip(&self.w2)
            .map(|(a, b)| *a + self.mu * *b)
            .collect()
    }

    pub fn wprime(&self) -> Vec<T> {
        self.w1p
            .iter()
            .zip(&self.w2p)
            .map(|(a, b)| *a + self.mu * *b)
            .collect()
    }

    /// `w1 w2' - w2 w1'`; identically one for exact solutions.
    pub fn wronskian(&self) -> Vec<T> {
        (0..self.y.len())
            .map(|i| self.w1[i] * self.w2p[i] - self.w2[i] * self.w1p[i])
            .collect()
    }
}

/// Which side of the prescribed pole the solution lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupSide {
    /// On `(y0, .)`, with `U -> +infinity` as `y -> y0+`.
    Above,
    /// On `(., y0)`, with `U -> -infinity` as `y -> y0-`.
    Below,
}

/// A sample of one fundamental solution: `(w, dw/dx)` in the chart variable.
type Pair<T> = [T; 4];

struct Linear<T: Real> {
    p: FlowParams<T>,
    tol: Tolerances<T>,
}

/// Sample of the pair as `(w, dw/dy)` values at one ordinate.
#[derive(Debug, Clone, Copy)]
struct Sample<T> {
    y: T,
    st: Pair<T>,
    /// `U` from the combination with weight `mu`.
    u: T,
}

impl<T: Real> Linear<T> {
    fn q_interior(&self, y: T) -> T {
        let nu = self.p.nu;
        let s = (T::one() - y) * (T::one() + y);
        self.p.p_c(y) / (T::lit(2.0) * nu * nu * s * s)
    }

    fn q_tail(&self, end: Endpoint, t: T) -> T {
        let nu = self.p.nu;
        let g = T::lit(2.0) - t;
        self.p.p_c_near(end, t) / (T::lit(2.0) * nu * nu * g * g)
    }

    /// Converts `(w, w_y)` to `(w, w_s)` near `end` and back.
    fn to_tail(end: Endpoint, t: T, st: Pair<T>) -> Pair<T> {
        let k = match end {
            Endpoint::Minus1 => t,
            Endpoint::Plus1 => -t,
        };
        [st[0], st[1] * k, st[2], st[3] * k]
    }

    fn from_tail(end: Endpoint, t: T, st: Pair<T>) -> Pair<T> {
        let k = match end {
            Endpoint::Minus1 => T::one() / t,
            Endpoint::Plus1 => -T::one() / t,
        };
        [st[0], st[1] * k, st[2], st[3] * k]
    }

    fn u_of(&self, y: T, w: T, wy: T) -> T {
        T::lit(2.0) * self.p.nu * (T::one() - y) * (T::one() + y) * wy / w
    }

    /// Marches the pair from `y0` toward `end` through `nodes` (ordered
    /// toward the pole), stopping at the first zero of
    /// `w = m1 * first + m2 * second`.
    fn side(
        &self,
        y0: T,
        st0: Pair<T>,
        m: (T, T),
        end: Endpoint,
        nodes: &[T],
    ) -> Result<(Vec<Sample<T>>, EndState<T>)> {
        let comb = |s: &Pair<T>| m.0 * s[0] + m.1 * s[2];
        let mut way: Vec<(T, bool)> = nodes.iter().map(|&y| (y, true)).collect();
        for b in [-edge::<T>(), edge::<T>()] {
            if end.dist(b) < end.dist(y0) && !nodes.contains(&b) {
                way.push((b, false));
            }
        }
        let floor = end.inner(T::tail_floor());
        if way.iter().all(|w| end.dist(w.0) > end.dist(floor)) {
            way.push((floor, false));
        }
        way.sort_by(|a, b| end.dist(b.0).partial_cmp(&end.dist(a.0)).unwrap());

        let fi = |y: T, s: &Pair<T>| {
            let q = self.q_interior(y);
            [s[1], q * s[0], s[3], q * s[2]]
        };
        let mut out = Vec::new();
        let mut y = y0;
        let mut st = st0;
        let mut h = T::zero();
        for &(yn, is_out) in &way {
            let tail = yn.abs() > edge::<T>() || y.abs() > edge::<T>();
            let e = if yn.abs() > edge::<T>() {
                region_end(yn)
            } else {
                region_end(y)
            };
            let advance = |from: T, s: Pair<T>, to: T, h: &mut T| -> Result<Pair<T>> {
                if tail {
                    let ft = |x: T, s: &Pair<T>| {
                        let q = self.q_tail(e, x.exp());
                        [s[1], s[1] + q * s[0], s[3], s[3] + q * s[2]]
                    };
                    let (ta, tb) = (e.dist(from), e.dist(to));
                    let r =
                        integrate_to(&ft, ta.ln(), Self::to_tail(e, ta, s), tb.ln(), h, &self.tol)?;
                    Ok(Self::from_tail(e, tb, r))
                } else {
                    integrate_to(&fi, from, s, to, h, &self.tol)
                }
            };
            let next = advance(y, st, yn, &mut h)?;
            let (wa, wb) = (comb(&st), comb(&next));
            if wa != T::zero() && (wb == T::zero() || (wa > T::zero()) != (wb > T::zero())) {
                // bisect on the ordinate, restarting from the last node
                let (mut lo, mut hi) = (y, yn);
                for _ in 0..200 {
                    let mid = if tail {
                        e.inner((e.dist(lo) * e.dist(hi)).sqrt())
                    } else {
                        (lo + hi) * T::lit(0.5)
                    };
                    if mid == lo || mid == hi {
                        break;
                    }
                    let mut hh = T::zero();
                    let sm = advance(y, st, mid, &mut hh)?;
                    if (comb(&sm) > T::zero()) == (wa > T::zero()) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok((out, EndState::BlowUp((lo + hi) * T::lit(0.5))));
            }
            y = yn;
            st = next;
            if is_out {
                let w = comb(&st);
                let wy = m.0 * st[1] + m.1 * st[3];
                // near a pole form U from the stretched derivative
                let u = if y.abs() > edge::<T>() {
                    let t = e.dist(y);
                    let ts = Self::to_tail(e, t, st);
                    let ws = m.0 * ts[1] + m.1 * ts[3];
                    let k = match e {
                        Endpoint::Minus1 => T::one(),
                        Endpoint::Plus1 => -T::one(),
                    };
                    k * T::lit(2.0) * self.p.nu * (T::lit(2.0) - t) * ws / w
                } else {
                    self.u_of(y, w, wy)
                };
                out.push(Sample { y, st, u });
            }
        }
        Ok((out, EndState::Reaches))
    }
}

fn region_end<T: Real>(y: T) -> Endpoint {
    if y < T::zero() {
        Endpoint::Minus1
    } else {
        Endpoint::Plus1
    }
}

fn make<T: Real>(p: FlowParams<T>, tol: &RiccatiTol<T>, scale: T) -> Result<Linear<T>> {
    if !(tol.rel > T::zero() && tol.abs > T::zero()) {
        return domain("tolerances must be positive");
    }
    Ok(Linear {
        p,
        tol: Tolerances {
            rel: tol.rel,
            abs: tol.abs * scale,
            ..Tolerances::default()
        },
    })
}

/// Solves the request through the linear second-order equation. Zeros of
/// `w` are located by sign change and bisection and reported as blow-up
/// points; the profile covers the zero-free interval containing `ybar`.
pub fn linear_rep<T: Real>(req: &SolveRequest<T>) -> Result<(LinearRep<T>, Profile<T>)> {
    let yb = req.ybar;
    if !(yb > -T::one() && yb < T::one()) {
        return domain(format!("ybar = {yb} outside (-1, 1)"));
    }
    let lin = make(req.params, &req.tol, T::one())?;
    let grid = req
        .grid
        .clone()
        .unwrap_or_else(|| standard_grid(DEFAULT_INTERIOR));
    let nu = req.params.nu;
    let mu = req.gamma / (T::lit(2.0) * nu * (T::one() - yb) * (T::one() + yb));
    let st0 = [T::one(), T::zero(), T::zero(), T::one()];
    let fwd: Vec<T> = grid.iter().copied().filter(|&y| y > yb).collect();
    let bwd: Vec<T> = grid.iter().rev().copied().filter(|&y| y < yb).collect();
    let empty = (Vec::new(), EndState::Open(yb));
    let (left, lend) = if req.direction != Direction::Forward {
        lin.side(yb, st0, (T::one(), mu), Endpoint::Minus1, &bwd)?
    } else {
        empty.clone()
    };
    let (right, rend) = if req.direction != Direction::Backward {
        lin.side(yb, st0, (T::one(), mu), Endpoint::Plus1, &fwd)?
    } else {
        empty
    };
    let start = Sample {
        y: yb,
        st: st0,
        u: req.gamma,
    };
    let samples: Vec<Sample<T>> = left
        .into_iter()
        .rev()
        .chain(std::iter::once(start))
        .chain(right)
        .collect();
    let mut zeros = Vec::new();
    if let EndState::BlowUp(z) = lend {
        zeros.push(z);
    }
    if let EndState::BlowUp(z) = rend {
        zeros.push(z);
    }
    let rep = LinearRep {
        y: samples.iter().map(|s| s.y).collect(),
        w1: samples.iter().map(|s| s.st[0]).collect(),
        w1p: samples.iter().map(|s| s.st[1]).collect(),
        w2: samples.iter().map(|s| s.st[2]).collect(),
        w2p: samples.iter().map(|s| s.st[3]).collect(),
        mu,
        d: if mu == T::zero() {
            None
        } else {
            Some(T::one() / mu)
        },
        zeros,
    };
    let prof = Profile {
        params: req.params,
        y: rep.y.clone(),
        u: samples.iter().map(|s| s.u).collect(),
        du: None,
        domain: Domain {
            left: lend,
            right: rend,
        },
    };
    Ok((rep, prof))
}

/// The local solution with a prescribed pole at `y0`, from `w(y0) = 0`,
/// `w'(y0) = 1`.
pub fn blowup_solution<T: Real>(
    params: &FlowParams<T>,
    y0: T,
    side: BlowupSide,
) -> Result<Profile<T>> {
    blowup_solution_with_slope(params, y0, side, T::one())
}

/// As [`blowup_solution`] with `w'(y0) = slope`; the profile does not
/// depend on `slope`.
pub fn blowup_solution_with_slope<T: Real>(
    params: &FlowParams<T>,
    y0: T,
    side: BlowupSide,
    slope: T,
) -> Result<Profile<T>> {
    if !(y0 > -T::one() && y0 < T::one()) {
        return domain(format!("y0 = {y0} outside (-1, 1)"));
    }
    if slope == T::zero() || !slope.is_finite() {
        return domain("w'(y0) must be finite and nonzero");
    }
    let lin = make(*params, &RiccatiTol::default(), slope.abs())?;
    let (end, sign) = match side {
        BlowupSide::Above => (Endpoint::Plus1, T::one()),
        BlowupSide::Below => (Endpoint::Minus1, -T::one()),
    };
    // geometric samples leaving the pole, then the standard grid
    let grid = standard_grid::<T>(DEFAULT_INTERIOR);
    let mut nodes: Vec<T> = grid
        .into_iter()
        .filter(|&y| (y - y0) * sign > T::zero())
        .collect();
    nodes.sort_by(|a, b| end.dist(*b).partial_cmp(&end.dist(*a)).unwrap());
    let first = nodes.first().map(|&y| (y - y0).abs()).unwrap_or(T::one());
    let mut d = T::lit(1e-8);
    let mut near = Vec::new();
    while d < first * T::lit(0.7) {
        near.push(y0 + sign * d);
        d = d * T::lit(2f64.sqrt());
    }
    let all: Vec<T> = near.into_iter().chain(nodes).collect();
    let st0 = [T::zero(), slope, T::zero(), T::zero()];
    let (samples, far) = lin.side(y0, st0, (T::one(), T::zero()), end, &all)?;
    let mut y: Vec<T> = samples.iter().map(|s| s.y).collect();
    let mut u: Vec<T> = samples.iter().map(|s| s.u).collect();
    let domain = match side {
        BlowupSide::Above => Domain {
            left: EndState::BlowUp(y0),
            right: far,
        },
        BlowupSide::Below => {
            y.reverse();
            u.reverse();
            Domain {
                left: far,
                right: EndState::BlowUp(y0),
            }
        }
    };
    Ok(Profile {
        params: *params,
        y,
        u,
        du: None,
        domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_from_gamma() {
        let p = FlowParams::new(1.0f64, 0.0, 0.0, 0.5).unwrap();
        let (rep, _) = linear_rep(&SolveRequest::new(p, 0.0, 3.0)).unwrap();
        assert_eq!(rep.mu, 1.5);
        let w = rep.wronskian();
        for (y, w) in rep.y.iter().zip(w.iter()) {
            if y.abs() <= 0.95 {
                assert!((w - 1.0).abs() < 1e-6, "y={y} W={w}");
            }
        }
    }

    #[test]
    fn pole_above_is_positive() {
        let p = FlowParams::new(1.0f64, 0.0, 0.0, 0.5).unwrap();
        let prof = blowup_solution(&p, 0.0, BlowupSide::Above).unwrap();
        assert!(prof.eval(1e-4).unwrap() > 1e3);
    }
}
