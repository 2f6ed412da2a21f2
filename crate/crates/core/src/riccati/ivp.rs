use super::{ClassKind, Direction, DomainClass, RiccatiTol, SolveRequest};
use crate::error::domain;
use crate::ode::{adaptive_step, dopri_step, Tolerances};
use crate::params::{Endpoint, FlowParams};
use crate::profile::{standard_grid, Domain, EndState, Profile, DEFAULT_INTERIOR};
use crate::{Error, Real, Result};

/// `|V|` above `SWITCH_BACK / threshold` returns to the `U` variable.
const SWITCH_BACK: f64 = 1e3;
/// Distance from the pole where anchored profiles start.
const ANCHOR_DIST: f64 = 1e-8;

pub(crate) fn edge<T: Real>() -> T {
    T::lit(0.95)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Region {
    Interior,
    Tail(Endpoint),
}

fn region<T: Real>(y: T) -> Region {
    if y < -edge::<T>() {
        Region::Tail(Endpoint::Minus1)
    } else if y > edge::<T>() {
        Region::Tail(Endpoint::Plus1)
    } else {
        Region::Interior
    }
}

fn mirror<T: Real>(end: Endpoint) -> T {
    match end {
        Endpoint::Minus1 => T::one(),
        Endpoint::Plus1 => -T::one(),
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Node<T> {
    pub y: T,
    pub u: T,
    pub du: T,
}

pub(crate) struct SideOut<T> {
    /// In marching order.
    pub nodes: Vec<Node<T>>,
    pub end: EndState<T>,
}

/// Roots at an endpoint in the mirrored frame, `(attracting, repelling)`.
pub(crate) fn mirrored_roots<T: Real>(p: &FlowParams<T>, end: Endpoint) -> Option<(T, T)> {
    let cn = match end {
        Endpoint::Minus1 => p.c1,
        Endpoint::Plus1 => p.c2,
    };
    let two = T::lit(2.0);
    let d = p.nu * p.nu + cn;
    if d < T::zero() {
        return None;
    }
    let s = d.sqrt();
    Some((two * p.nu - two * s, two * p.nu + two * s))
}

/// Slope `a` of the repelling branch `U~ = rep + a t` in the mirrored frame.
pub(crate) fn anchor_slope<T: Real>(p: &FlowParams<T>, end: Endpoint, rep: T) -> T {
    let (cn, cf) = near_far(p, end);
    let two = T::lit(2.0);
    (cf - cn + two * p.c3 - two * p.nu * rep) / rep
}

fn near_far<T: Real>(p: &FlowParams<T>, end: Endpoint) -> (T, T) {
    match end {
        Endpoint::Minus1 => (p.c1, p.c2),
        Endpoint::Plus1 => (p.c2, p.c1),
    }
}

pub(crate) struct Integrator<T: Real> {
    pub p: FlowParams<T>,
    tol: Tolerances<T>,
    thr: T,
}

impl<T: Real> Integrator<T> {
    pub fn new(p: FlowParams<T>, tol: &RiccatiTol<T>) -> Result<Self> {
        if !(tol.rel > T::zero() && tol.abs > T::zero()) {
            return domain("tolerances must be positive");
        }
        if let Ok(ts) = p.tau_values() {
            if !(tol.blowup_threshold > ts.max_abs()) {
                return domain(format!(
                    "blow-up threshold {} must exceed max |tau| = {}",
                    tol.blowup_threshold,
                    ts.max_abs()
                ));
            }
        }
        Ok(Self {
            p,
            tol: Tolerances {
                rel: tol.rel,
                abs: tol.abs,
                ..Tolerances::default()
            },
            thr: tol.blowup_threshold,
        })
    }

    fn rhs_u(&self, y: T, u: T) -> T {
        let nu = self.p.nu;
        let half = T::lit(0.5);
        let one = T::one();
        (self.p.p_c(y) - T::lit(2.0) * nu * y * u - half * u * u) / (nu * (one - y) * (one + y))
    }

    fn rhs_v(&self, y: T, v: T) -> T {
        let nu = self.p.nu;
        let one = T::one();
        (-self.p.p_c(y) * v * v + T::lit(2.0) * nu * y * v + T::lit(0.5))
            / (nu * (one - y) * (one + y))
    }

    /// Mirrored right-hand side numerator near `end` with `U~ = r + d`;
    /// `rr` is the root residual `2 cn + 2 nu r - r^2 / 2`.
    fn tail_n(&self, end: Endpoint, t: T, d: T, r: T, rr: T) -> T {
        let (cn, cf) = near_far(&self.p, end);
        let nu = self.p.nu;
        let c3 = self.p.c3;
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        rr + t * (cf - cn + two * c3 - two * nu * r) - c3 * t * t - two * nu * t * d
            + (two * nu - r) * d
            - half * d * d
    }

    fn root_residual(&self, end: Endpoint, r: T) -> T {
        let (cn, _) = near_far(&self.p, end);
        if let Some((a, b)) = mirrored_roots(&self.p, end) {
            if r == a || r == b {
                return T::zero();
            }
        }
        let two = T::lit(2.0);
        two * cn + two * self.p.nu * r - T::lit(0.5) * r * r
    }

    fn tail_rhs_v(&self, end: Endpoint, t: T, v: T) -> T {
        let nu = self.p.nu;
        let two = T::lit(2.0);
        let pt = self.p.p_c_near(end, t);
        -(pt * v * v - two * nu * (t - T::one()) * v - T::lit(0.5)) / (nu * (two - t))
    }

    /// Reference root for a mirrored value: the nearer endpoint root.
    fn pick_ref(&self, end: Endpoint, ut: T) -> T {
        match mirrored_roots(&self.p, end) {
            Some((a, b)) => {
                if (ut - a).abs() <= (ut - b).abs() {
                    a
                } else {
                    b
                }
            }
            None => T::zero(),
        }
    }

    /// Marches one chart from `x0` to `x1`. Returns the chart abscissa of a
    /// blow-up if one occurs.
    #[allow(clippy::too_many_arguments)]
    fn run<FU, FV>(
        &self,
        fu: &FU,
        fv: &FV,
        offset: T,
        x0: T,
        x1: T,
        mode: &mut Mode,
        state: &mut T,
        h: &mut T,
    ) -> Result<Option<T>>
    where
        FU: Fn(T, &[T; 1]) -> [T; 1],
        FV: Fn(T, &[T; 1]) -> [T; 1],
    {
        let dir = if x1 >= x0 { T::one() } else { -T::one() };
        if *h == T::zero() || *h * dir <= T::zero() || !h.is_finite() {
            *h = (x1 - x0) * T::lit(0.1);
        }
        let back = T::lit(SWITCH_BACK) / self.thr;
        let mut x = x0;
        for _ in 0..self.tol.max_steps {
            let remaining = x1 - x;
            if remaining * dir <= T::zero() {
                return Ok(None);
            }
            let last = h.abs() >= remaining.abs();
            let trial = if last { remaining } else { *h };
            let acc = match *mode {
                Mode::U => adaptive_step(fu, x, &[*state], trial, &self.tol)?,
                Mode::V => adaptive_step(fv, x, &[*state], trial, &self.tol)?,
            };
            match *mode {
                Mode::U => {
                    *state = acc.y[0];
                    let u = offset + *state;
                    if u.abs() > self.thr {
                        *mode = Mode::V;
                        *state = T::one() / u;
                    }
                }
                Mode::V => {
                    let (v0, v1) = (*state, acc.y[0]);
                    if v1 == T::zero() || (v0 > T::zero()) != (v1 > T::zero()) {
                        return Ok(Some(bisect_zero(fv, x, v0, acc.h)));
                    }
                    *state = v1;
                    if v1.abs() > back {
                        *mode = Mode::U;
                        *state = T::one() / v1 - offset;
                    }
                }
            }
            if last && acc.h == trial {
                x = x1;
            } else {
                x = acc.x;
                *h = acc.h_next;
            }
        }
        Err(Error::ToleranceFailure(x.to_f64_lossy()))
    }

    /// Integrates from `(y0, u0)` toward `end`, recording `nodes` (ordered
    /// toward the pole), then decides whether the pole is reached.
    pub fn side(&self, y0: T, u0: T, end: Endpoint, nodes: &[T]) -> Result<SideOut<T>> {
        let mut way: Vec<(T, bool)> = nodes.iter().map(|&y| (y, true)).collect();
        let floor_y = end.inner(T::tail_floor());
        let toward = |a: T, b: T| end.dist(b) < end.dist(a);
        for b in [-edge::<T>(), edge::<T>()] {
            if toward(y0, b) && !nodes.contains(&b) {
                way.push((b, false));
            }
        }
        let last_dist = way
            .iter()
            .map(|w| end.dist(w.0))
            .fold(end.dist(y0), |a, b| a.min(b));
        if last_dist > end.dist(floor_y) {
            way.push((floor_y, false));
        }
        way.sort_by(|a, b| end.dist(b.0).partial_cmp(&end.dist(a.0)).unwrap());

        let mut out = Vec::with_capacity(nodes.len());
        // real-frame value: U in mode U, V = 1/U in mode V
        let mut mode = if u0.abs() > self.thr {
            Mode::V
        } else {
            Mode::U
        };
        let mut val = if mode == Mode::V { T::one() / u0 } else { u0 };
        let mut y = y0;
        let mut i = 0;
        let mut tail_state: Option<(T, T, Mode)> = None;
        while i < way.len() {
            let reg = match (region(y), region(way[i].0)) {
                (Region::Interior, r) => r,
                (r, _) => r,
            };
            // extent of this leg
            let mut j = i;
            while j < way.len() {
                let ya = if j == i { y } else { way[j - 1].0 };
                let r = match (region(ya), region(way[j].0)) {
                    (Region::Interior, r) => r,
                    (r, _) => r,
                };
                if r != reg {
                    break;
                }
                j += 1;
            }
            match reg {
                Region::Interior => {
                    let fu = |x: T, w: &[T; 1]| [self.rhs_u(x, w[0])];
                    let fv = |x: T, w: &[T; 1]| [self.rhs_v(x, w[0])];
                    let mut h = T::zero();
                    for &(yn, is_out) in &way[i..j] {
                        if let Some(yb) =
                            self.run(&fu, &fv, T::zero(), y, yn, &mut mode, &mut val, &mut h)?
                        {
                            return Ok(SideOut {
                                nodes: out,
                                end: EndState::BlowUp(yb),
                            });
                        }
                        y = yn;
                        if is_out {
                            let u = if mode == Mode::U { val } else { T::one() / val };
                            out.push(Node {
                                y,
                                u,
                                du: self.rhs_u(y, u),
                            });
                        }
                    }
                    tail_state = None;
                }
                Region::Tail(e) => {
                    let k = mirror::<T>(e);
                    let mut st = k * val;
                    let mut r = if mode == Mode::U {
                        self.pick_ref(e, st)
                    } else {
                        T::zero()
                    };
                    if mode == Mode::U {
                        st = st - r;
                    }
                    let mut h = T::zero();
                    let mut x = e.dist(y).ln();
                    for &(yn, is_out) in &way[i..j] {
                        let xn = e.dist(yn).ln();
                        let rr = self.root_residual(e, r);
                        let fu = |s: T, w: &[T; 1]| {
                            let t = s.exp();
                            [self.tail_n(e, t, w[0], r, rr) / (self.p.nu * (T::lit(2.0) - t))]
                        };
                        let fv = |s: T, w: &[T; 1]| [self.tail_rhs_v(e, s.exp(), w[0])];
                        if let Some(sb) =
                            self.run(&fu, &fv, r, x, xn, &mut mode, &mut st, &mut h)?
                        {
                            return Ok(SideOut {
                                nodes: out,
                                end: EndState::BlowUp(e.inner(sb.exp())),
                            });
                        }
                        x = xn;
                        y = yn;
                        let t = e.dist(y);
                        if is_out {
                            let node = match mode {
                                Mode::U => Node {
                                    y,
                                    u: k * (r + st),
                                    du: self.tail_n(e, t, st, r, rr)
                                        / (self.p.nu * t * (T::lit(2.0) - t)),
                                },
                                Mode::V => {
                                    let u = k / st;
                                    Node {
                                        y,
                                        u,
                                        du: self.rhs_u(y, u),
                                    }
                                }
                            };
                            out.push(node);
                        }
                        if mode == Mode::U {
                            let r_new = self.pick_ref(e, r + st);
                            if r_new != r {
                                st = st + r - r_new;
                                r = r_new;
                            }
                        }
                    }
                    tail_state = Some((r, st, mode));
                    val = match mode {
                        Mode::U => k * (r + st),
                        Mode::V => k * st,
                    };
                }
            }
            i = j;
        }
        let (r, st, tmode) = match tail_state {
            Some(s) => s,
            None => return Err(Error::ToleranceFailure(y.to_f64_lossy())),
        };
        let end_state = self.decide(end, r, st, tmode)?;
        Ok(SideOut {
            nodes: out,
            end: end_state,
        })
    }

    /// Endpoint decision at the floor distance, continuing deeper when the
    /// solution is not clearly inside the attracting basin.
    fn decide(&self, end: Endpoint, r: T, st: T, mut mode: Mode) -> Result<EndState<T>> {
        let margin = T::lit(1e-6);
        if mode == Mode::U {
            if let Some((_, rep)) = mirrored_roots(&self.p, end) {
                let diff = if r == rep { st } else { r + st - rep };
                if diff < -margin * rep.abs().max(T::one()) {
                    return Ok(EndState::Reaches);
                }
            }
        }
        let s0 = T::tail_floor().ln();
        let s_deep = T::min_positive_value().ln() + T::lit(20.0);
        let rr = self.root_residual(end, r);
        let fu = |s: T, w: &[T; 1]| {
            let t = s.exp();
            [self.tail_n(end, t, w[0], r, rr) / (self.p.nu * (T::lit(2.0) - t))]
        };
        let fv = |s: T, w: &[T; 1]| [self.tail_rhs_v(end, s.exp(), w[0])];
        let mut state = st;
        let mut h = T::zero();
        match self.run(&fu, &fv, r, s0, s_deep, &mut mode, &mut state, &mut h)? {
            Some(sb) => Ok(EndState::BlowUp(end.inner(sb.exp()))),
            None if mirrored_roots(&self.p, end).is_some() && mode == Mode::U => {
                Ok(EndState::Reaches)
            }
            None => Err(Error::ToleranceFailure(end.y::<T>().to_f64_lossy())),
        }
    }
}

fn bisect_zero<T, F>(fv: &F, x: T, v0: T, h: T) -> T
where
    T: Real,
    F: Fn(T, &[T; 1]) -> [T; 1],
{
    let (mut lo, mut hi) = (T::zero(), h);
    let half = T::lit(0.5);
    for _ in 0..200 {
        let mid = (lo + hi) * half;
        if mid == lo || mid == hi {
            break;
        }
        let v = dopri_step(fv, x, &[v0], mid).0[0];
        if v == T::zero() {
            return x + mid;
        }
        if (v > T::zero()) == (v0 > T::zero()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    x + (lo + hi) * half
}

fn check_grid<T: Real>(g: &[T]) -> Result<()> {
    if g.iter().any(|y| !(*y > -T::one() && *y < T::one())) {
        return domain("grid points must lie in (-1, 1)");
    }
    if g.windows(2).any(|w| !(w[0] < w[1])) {
        return domain("grid must be strictly increasing");
    }
    Ok(())
}

/// Class of an interval of existence from its end states. Open ends do not
/// count as blow-ups.
pub fn domain_class<T: Real>(d: &Domain<T>) -> DomainClass<T> {
    let mut pts = Vec::new();
    if let EndState::BlowUp(y) = d.left {
        pts.push(y);
    }
    if let EndState::BlowUp(y) = d.right {
        pts.push(y);
    }
    let class = match (
        matches!(d.left, EndState::BlowUp(_)),
        matches!(d.right, EndState::BlowUp(_)),
    ) {
        (false, false) => ClassKind::Global,
        (false, true) => ClassKind::A1,
        (true, false) => ClassKind::A2,
        (true, true) => ClassKind::A3,
    };
    DomainClass {
        class,
        blowup_points: pts,
    }
}

/// Solves `U(ybar) = gamma` in the requested direction(s).
///
/// The profile holds the grid points inside the interval of existence,
/// with `du` taken from the equation itself. An unexplored side is marked
/// [`EndState::Open`] and does not count toward the class.
pub fn integrate_ivp<T: Real>(req: &SolveRequest<T>) -> Result<(Profile<T>, DomainClass<T>)> {
    if !(req.ybar > -T::one() && req.ybar < T::one()) {
        return domain(format!("ybar = {} outside (-1, 1)", req.ybar));
    }
    if !req.gamma.is_finite() {
        return domain("gamma must be finite");
    }
    let eng = Integrator::new(req.params, &req.tol)?;
    let grid = match &req.grid {
        Some(g) => {
            check_grid(g)?;
            g.clone()
        }
        None => standard_grid(DEFAULT_INTERIOR),
    };
    let yb = req.ybar;
    let fwd_nodes: Vec<T> = grid.iter().copied().filter(|&y| y > yb).collect();
    let bwd_nodes: Vec<T> = grid.iter().rev().copied().filter(|&y| y < yb).collect();
    let start = Node {
        y: yb,
        u: req.gamma,
        du: eng.rhs_u(yb, req.gamma),
    };
    let (left, right) = match req.direction {
        Direction::Forward => (
            SideOut {
                nodes: vec![],
                end: EndState::Open(yb),
            },
            eng.side(yb, req.gamma, Endpoint::Plus1, &fwd_nodes)?,
        ),
        Direction::Backward => (
            eng.side(yb, req.gamma, Endpoint::Minus1, &bwd_nodes)?,
            SideOut {
                nodes: vec![],
                end: EndState::Open(yb),
            },
        ),
        Direction::Both => (
            eng.side(yb, req.gamma, Endpoint::Minus1, &bwd_nodes)?,
            eng.side(yb, req.gamma, Endpoint::Plus1, &fwd_nodes)?,
        ),
    };
    let prof = assemble(req.params, left, start, right);
    let class = domain_class(&prof.domain);
    Ok((prof, class))
}

fn assemble<T: Real>(
    params: FlowParams<T>,
    left: SideOut<T>,
    start: Node<T>,
    right: SideOut<T>,
) -> Profile<T> {
    let mut nodes: Vec<Node<T>> = left.nodes.into_iter().rev().collect();
    nodes.push(start);
    nodes.extend(right.nodes);
    Profile {
        params,
        y: nodes.iter().map(|n| n.y).collect(),
        u: nodes.iter().map(|n| n.u).collect(),
        du: Some(nodes.iter().map(|n| n.du).collect()),
        domain: Domain {
            left: left.end,
            right: right.end,
        },
    }
}

/// Whether the solution through `(ybar, gamma)` extends to `end`.
pub fn reaches_endpoint<T: Real>(
    params: &FlowParams<T>,
    ybar: T,
    gamma: T,
    end: Endpoint,
    tol: &RiccatiTol<T>,
) -> Result<bool> {
    let eng = Integrator::new(*params, tol)?;
    Ok(eng.side(ybar, gamma, end, &[])?.end.reaches())
}

/// The solution leaving `end` along the repelling endpoint root, i.e. the
/// upper solution for `Minus1` and the lower one for `Plus1`. It starts from
/// the local expansion at distance `1e-8` and is integrated toward the
/// other pole; samples closer to `end` come from the expansion.
pub fn anchored_profile<T: Real>(
    params: &FlowParams<T>,
    end: Endpoint,
    tol: &RiccatiTol<T>,
    grid: Option<&[T]>,
) -> Result<Profile<T>> {
    let (_, rep) = match mirrored_roots(params, end) {
        Some(r) => r,
        None => return domain("no real endpoint root"),
    };
    let eng = Integrator::new(*params, tol)?;
    let grid: Vec<T> = match grid {
        Some(g) => {
            check_grid(g)?;
            g.to_vec()
        }
        None => standard_grid(DEFAULT_INTERIOR),
    };
    let k = mirror::<T>(end);
    let a = anchor_slope(params, end, rep);
    let t_a = T::lit(ANCHOR_DIST).max(T::tail_floor() * T::lit(10.0));
    // anchor on the outermost grid point within t_a, if there is one
    let t0 = grid
        .iter()
        .map(|&y| end.dist(y))
        .filter(|&t| t <= t_a)
        .fold(T::zero(), |m, t| m.max(t));
    let t0 = if t0 > T::zero() { t0 } else { t_a };
    let y0 = end.inner(t0);
    let u0 = k * (rep + a * t0);
    let other = match end {
        Endpoint::Minus1 => Endpoint::Plus1,
        Endpoint::Plus1 => Endpoint::Minus1,
    };
    let mut series: Vec<Node<T>> = grid
        .iter()
        .filter(|&&y| end.dist(y) < t0)
        .map(|&y| {
            let t = end.dist(y);
            Node {
                y,
                u: k * (rep + a * t),
                du: a,
            }
        })
        .collect();
    // order from the pole outward, matching the marching order reversed
    series.sort_by(|p, q| end.dist(p.y).partial_cmp(&end.dist(q.y)).unwrap());
    let away: Vec<T> = {
        let mut v: Vec<T> = grid.iter().copied().filter(|&y| end.dist(y) > t0).collect();
        v.sort_by(|p, q| other.dist(*q).partial_cmp(&other.dist(*p)).unwrap());
        v
    };
    let start = Node {
        y: y0,
        u: u0,
        du: a,
    };
    let run = eng.side(y0, u0, other, &away)?;
    let near = SideOut {
        nodes: series,
        end: EndState::Reaches,
    };
    Ok(match end {
        Endpoint::Minus1 => assemble(*params, near, start, run),
        Endpoint::Plus1 => assemble(*params, run, start, near),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(nu: f64, c1: f64, c2: f64, c3: f64) -> FlowParams<f64> {
        FlowParams::new(nu, c1, c2, c3).unwrap()
    }

    #[test]
    fn landau_round_trip() {
        let (prof, cls) =
            integrate_ivp(&SolveRequest::new(fp(1.0, 0.0, 0.0, 0.0), 0.0, 1.0)).unwrap();
        assert_eq!(cls.class, ClassKind::Global);
        for (y, u) in prof.y.iter().zip(prof.u.iter()) {
            let exact = 2.0 * (1.0 - y * y) / (y + 2.0);
            assert!((u - exact).abs() < 1e-8, "y={y} u={u} exact={exact}");
        }
    }

    #[test]
    fn large_gamma_blows_up_on_the_left() {
        let (prof, cls) =
            integrate_ivp(&SolveRequest::new(fp(1.0, 0.0, 0.0, 0.5), 0.0, 10.0)).unwrap();
        assert_eq!(cls.class, ClassKind::A2);
        let y0 = cls.blowup_points[0];
        assert!(y0 > -1.0 && y0 < 0.0);
        assert!(prof.domain.right.reaches());
        assert!(prof.u.last().unwrap().abs() < 1e-6);
    }

    #[test]
    fn rejects_small_threshold() {
        let mut req = SolveRequest::new(fp(1.0, 0.0, 0.0, 0.5), 0.0, 0.0);
        req.tol.blowup_threshold = 3.0;
        assert!(matches!(integrate_ivp(&req), Err(Error::Domain(_))));
    }
}
