//! Stokes stream function of a profile on the meridional plane and its
//! level-set streamlines.
//!
//! For a field `u = u(x/|x|) / |x|` with `U(cos theta) = u_theta sin theta`
//! the function `psi = -r U(cos theta)` satisfies
//! `u_r = psi_theta / (r^2 sin theta)` and `u_theta = -psi_r / (r sin theta)`,
//! so its contours in the `(x1, x3)` half-planes are the streamlines.

use std::collections::BTreeMap;

use homsol::closedform::ClosedForm;
use homsol::{Error, FlowParams64, Profile64};

/// Distance from the axis and the origin below which samples are masked.
pub const AXIS_MARGIN: f64 = 1e-3;

/// `(U, U')` as a function of `y = cos(theta)`.
type Eval = Box<dyn Fn(f64) -> Option<(f64, f64)> + Send + Sync>;

/// Angular profile with its derivative.
pub struct AngularProfile {
    eval: Eval,
    /// Ordinates where `U'` jumps.
    pub kinks: Vec<f64>,
}

impl AngularProfile {
    /// Cubic Hermite interpolant of a sampled profile; `U'` is the exact
    /// derivative of the interpolant.
    pub fn from_profile(p: &Profile64) -> Self {
        let slopes = p.slopes();
        let p = p.clone();
        Self {
            eval: Box::new(move |y| p.eval_with_slopes(&slopes, y)),
            kinks: Vec::new(),
        }
    }

    pub fn from_closed(f: ClosedForm<f64>) -> Self {
        Self {
            eval: Box::new(move |y| Some((f.eval(y), f.deriv(y)))),
            kinks: Vec::new(),
        }
    }

    /// `V = sign sqrt(2 P_c)`, the Euler branch with a fixed sign.
    pub fn euler(c: FlowParams64, sign: f64) -> Result<Self, Error> {
        let kinks = p_zeros(&c);
        for k in 0..=200 {
            let y = -1.0 + k as f64 / 100.0;
            if c.p_c(y) < -1e-12 {
                return Err(Error::NotEulerAdmissible(format!("P_c({y}) < 0")));
            }
        }
        Ok(Self {
            eval: Box::new(move |y| {
                let v = (2.0 * c.p_c(y).max(0.0)).sqrt();
                let dv = if v > 0.0 { c.p_c_prime(y) / v } else { 0.0 };
                Some((sign * v, sign * dv))
            }),
            kinks,
        })
    }

    pub fn from_fn(f: impl Fn(f64) -> Option<(f64, f64)> + Send + Sync + 'static) -> Self {
        Self {
            eval: Box::new(f),
            kinks: Vec::new(),
        }
    }

    pub fn eval(&self, y: f64) -> Option<(f64, f64)> {
        (self.eval)(y).filter(|(u, du)| u.is_finite() && du.is_finite())
    }
}

fn p_zeros(c: &FlowParams64) -> Vec<f64> {
    let [a0, a1, a2] = c.poly_coeffs();
    let mut out = Vec::new();
    if a2.abs() < 1e-300 {
        if a1 != 0.0 {
            out.push(-a0 / a1);
        }
    } else {
        let d = a1 * a1 - 4.0 * a0 * a2;
        let scale = a1 * a1 + (4.0 * a0 * a2).abs();
        if d.abs() <= 1e-12 * scale {
            out.push(-a1 / (2.0 * a2));
        } else if d > 0.0 {
            let s = d.sqrt();
            out.push((-a1 - s) / (2.0 * a2));
            out.push((-a1 + s) / (2.0 * a2));
        }
    }
    out.retain(|y| y.abs() <= 1.0);
    out.sort_by(f64::total_cmp);
    out
}

/// Rectangle of the meridional plane sampled on a uniform node grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeridionalBox {
    pub x1: (f64, f64),
    pub x3: (f64, f64),
    pub n1: usize,
    pub n3: usize,
}

impl Default for MeridionalBox {
    fn default() -> Self {
        Self {
            x1: (-2.0, 2.0),
            x3: (-2.0, 2.0),
            n1: 201,
            n3: 201,
        }
    }
}

impl MeridionalBox {
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let s = |(a, b): (f64, f64), k: usize, n: usize| a + (b - a) * k as f64 / (n - 1) as f64;
        (s(self.x1, i, self.n1), s(self.x3, j, self.n3))
    }

    fn validate(&self) -> Result<(), Error> {
        if self.n1 < 16 || self.n3 < 16 {
            return Err(Error::Domain(
                "meridional grid needs at least 16 nodes per side".into(),
            ));
        }
        if !(self.x1.0 < self.x1.1 && self.x3.0 < self.x3.1)
            || ![self.x1.0, self.x1.1, self.x3.0, self.x3.1]
                .iter()
                .all(|v| v.is_finite())
        {
            return Err(Error::Domain("empty or non-finite meridional box".into()));
        }
        Ok(())
    }
}

/// Whether a meridional point is far enough from the axis and the origin.
pub fn admissible(x1: f64, x3: f64) -> bool {
    x1.abs() >= AXIS_MARGIN && x1.hypot(x3) >= AXIS_MARGIN
}

fn psi_at(prof: &AngularProfile, x1: f64, x3: f64) -> Option<(f64, (f64, f64))> {
    if !admissible(x1, x3) {
        return None;
    }
    let r = x1.hypot(x3);
    let y = (x3 / r).clamp(-1.0, 1.0);
    let (u, du) = prof.eval(y)?;
    let psi = -r * u;
    let r2 = r * r;
    let g1 = -x1 * u / r + x1 * x3 * du / r2;
    let g3 = -x3 * u / r - x1 * x1 * du / r2;
    Some((psi, (g1, g3)))
}

/// `psi` at a point, `None` on the masked strip or outside the profile's
/// domain.
pub fn psi(prof: &AngularProfile, x1: f64, x3: f64) -> Option<f64> {
    psi_at(prof, x1, x3).map(|(p, _)| p)
}

/// Meridional velocity `(u_1, u_3)` from `(U, U')` directly.
pub fn velocity(prof: &AngularProfile, x1: f64, x3: f64) -> Option<(f64, f64)> {
    if !admissible(x1, x3) {
        return None;
    }
    let r = x1.hypot(x3);
    let (u, du) = prof.eval((x3 / r).clamp(-1.0, 1.0))?;
    let r2 = r * r;
    Some((du * x1 / r2 + u * x3 / (r * x1), du * x3 / r2 - u / r))
}

pub struct StreamFunctionField {
    pub bbox: MeridionalBox,
    /// `psi[j][i]` at node `(i, j)`: `i` along `x1`, `j` along `x3`.
    pub psi: Vec<Vec<Option<f64>>>,
}

pub fn stream_function(
    prof: &AngularProfile,
    bbox: MeridionalBox,
) -> Result<StreamFunctionField, Error> {
    bbox.validate()?;
    let psi: Vec<Vec<Option<f64>>> = (0..bbox.n3)
        .map(|j| {
            (0..bbox.n1)
                .map(|i| {
                    let (x1, x3) = bbox.node(i, j);
                    psi(prof, x1, x3)
                })
                .collect()
        })
        .collect();
    if psi.iter().flatten().all(Option::is_none) {
        return Err(Error::GridTouchesAxis);
    }
    Ok(StreamFunctionField { bbox, psi })
}

impl StreamFunctionField {
    pub fn finite_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.psi.iter().flatten().flatten().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `n` levels at the equally spaced quantiles `(k + 1/2) / n`, strictly
    /// increasing after removal of repeats.
    pub fn quantile_levels(&self, n: usize) -> Vec<f64> {
        let v = self.finite_values();
        if v.is_empty() || n == 0 {
            return Vec::new();
        }
        let mut out: Vec<f64> = (0..n)
            .map(|k| {
                let q = (k as f64 + 0.5) / n as f64;
                v[((v.len() - 1) as f64 * q).round() as usize]
            })
            .collect();
        out.dedup();
        out
    }

    /// Marching-squares contours at `level`, chained into polylines with
    /// each vertex projected onto the level set.
    pub fn contour(&self, prof: &AngularProfile, level: f64) -> Vec<Vec<(f64, f64)>> {
        let b = &self.bbox;
        // edge key: (i, j, 0) joins (i, j)-(i+1, j); (i, j, 1) joins (i, j)-(i, j+1)
        let mut segs: Vec<[(usize, usize, u8); 2]> = Vec::new();
        for j in 0..b.n3 - 1 {
            for i in 0..b.n1 - 1 {
                let (Some(a), Some(bq), Some(c), Some(d)) = (
                    self.psi[j][i],
                    self.psi[j][i + 1],
                    self.psi[j + 1][i + 1],
                    self.psi[j + 1][i],
                ) else {
                    continue;
                };
                let up = |v: f64| v >= level;
                let idx =
                    (up(a) as u8) | (up(bq) as u8) << 1 | (up(c) as u8) << 2 | (up(d) as u8) << 3;
                let bottom = (i, j, 0u8);
                let right = (i + 1, j, 1u8);
                let top = (i, j + 1, 0u8);
                let left = (i, j, 1u8);
                let centre_up = up(0.25 * (a + bq + c + d));
                match idx {
                    0 | 15 => {}
                    1 | 14 => segs.push([left, bottom]),
                    2 | 13 => segs.push([bottom, right]),
                    3 | 12 => segs.push([left, right]),
                    4 | 11 => segs.push([right, top]),
                    6 | 9 => segs.push([bottom, top]),
                    7 | 8 => segs.push([left, top]),
                    5 => {
                        if centre_up {
                            segs.push([left, top]);
                            segs.push([bottom, right]);
                        } else {
                            segs.push([left, bottom]);
                            segs.push([right, top]);
                        }
                    }
                    10 => {
                        if centre_up {
                            segs.push([left, bottom]);
                            segs.push([right, top]);
                        } else {
                            segs.push([left, top]);
                            segs.push([bottom, right]);
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
        let chains = chain(&segs);
        chains
            .into_iter()
            .map(|c| c.into_iter().map(|e| self.vertex(prof, e, level)).collect())
            .collect()
    }

    fn vertex(
        &self,
        prof: &AngularProfile,
        (i, j, d): (usize, usize, u8),
        level: f64,
    ) -> (f64, f64) {
        let (i2, j2) = if d == 0 { (i + 1, j) } else { (i, j + 1) };
        let (pa, pb) = (self.psi[j][i].unwrap(), self.psi[j2][i2].unwrap());
        let t = if pb != pa {
            ((level - pa) / (pb - pa)).clamp(0.0, 1.0)
        } else {
            0.5
        };
        let (xa, za) = self.bbox.node(i, j);
        let (xb, zb) = self.bbox.node(i2, j2);
        let p0 = (xa + t * (xb - xa), za + t * (zb - za));
        project(prof, p0, level, (xb - xa).abs().max((zb - za).abs()))
    }
}

/// Newton steps along the gradient onto `psi = level`, staying within
/// `reach` of the start.
fn project(prof: &AngularProfile, p0: (f64, f64), level: f64, reach: f64) -> (f64, f64) {
    let mut p = p0;
    for _ in 0..6 {
        let Some((v, (g1, g3))) = psi_at(prof, p.0, p.1) else {
            return p0;
        };
        let g2 = g1 * g1 + g3 * g3;
        if g2 == 0.0 || !g2.is_finite() {
            break;
        }
        let f = (v - level) / g2;
        let q = (p.0 - f * g1, p.1 - f * g3);
        if (q.0 - p0.0).hypot(q.1 - p0.1) > reach || !admissible(q.0, q.1) {
            return p;
        }
        let done = (q.0 - p.0).hypot(q.1 - p.1) < 1e-14;
        p = q;
        if done {
            break;
        }
    }
    p
}

/// Joins segments sharing an edge into polylines. Open chains are
/// started from their free ends first, then closed loops; the output
/// order only depends on the segment order.
fn chain(segs: &[[(usize, usize, u8); 2]]) -> Vec<Vec<(usize, usize, u8)>> {
    let mut at: BTreeMap<(usize, usize, u8), Vec<usize>> = BTreeMap::new();
    for (k, s) in segs.iter().enumerate() {
        at.entry(s[0]).or_default().push(k);
        at.entry(s[1]).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();
    let walk = |start: usize, from: (usize, usize, u8), used: &mut Vec<bool>| {
        let mut line = vec![from];
        let mut k = start;
        let mut cur = from;
        loop {
            used[k] = true;
            let next = if segs[k][0] == cur {
                segs[k][1]
            } else {
                segs[k][0]
            };
            line.push(next);
            cur = next;
            match at[&cur].iter().find(|&&m| !used[m]) {
                Some(&m) => k = m,
                None => break,
            }
        }
        line
    };
    for k in 0..segs.len() {
        if used[k] {
            continue;
        }
        for end in segs[k] {
            if !used[k] && at[&end].len() == 1 {
                out.push(walk(k, end, &mut used));
            }
        }
    }
    for k in 0..segs.len() {
        if !used[k] {
            out.push(walk(k, segs[k][0], &mut used));
        }
    }
    out
}

/// Largest `|u . n| / |u|` over the vertices, where `n` is the unit normal
/// of the level set from a fourth-order central difference of `psi` and
/// `u` is evaluated from `(U, U')`. Vertices within the difference stencil
/// of a kink ray, or where either vector vanishes, are skipped.
pub fn tangency_defect(prof: &AngularProfile, line: &[(f64, f64)]) -> Option<f64> {
    let mut worst: Option<f64> = None;
    for &(x1, x3) in line {
        let r = x1.hypot(x3);
        let h = 1e-5 * x1.abs().min(r).min(1.0);
        if prof
            .kinks
            .iter()
            .any(|k| (x3 / r - k).abs() <= 8.0 * h / r + 1e-9)
        {
            continue;
        }
        let Some(u) = velocity(prof, x1, x3) else {
            continue;
        };
        let d = |dx: f64, dz: f64| -> Option<f64> {
            let f = |s: f64| psi(prof, x1 + s * dx, x3 + s * dz);
            Some((8.0 * (f(h)? - f(-h)?) - (f(2.0 * h)? - f(-2.0 * h)?)) / (12.0 * h))
        };
        let (Some(n1), Some(n3)) = (d(1.0, 0.0), d(0.0, 1.0)) else {
            continue;
        };
        let (nn, un) = (n1.hypot(n3), u.0.hypot(u.1));
        if nn == 0.0 || un == 0.0 || !(nn.is_finite() && un.is_finite()) {
            continue;
        }
        let defect = (u.0 * n1 + u.1 * n3).abs() / (nn * un);
        worst = Some(worst.map_or(defect, |w: f64| w.max(defect)));
    }
    worst
}

/// Contours at the given levels with their tangency defects.
pub struct Streamlines {
    pub bbox: MeridionalBox,
    pub levels: Vec<f64>,
    /// `(level index, polyline)`.
    pub lines: Vec<(usize, Vec<(f64, f64)>)>,
    pub max_defect: f64,
}

pub fn streamlines(
    prof: &AngularProfile,
    bbox: MeridionalBox,
    levels: Option<&[f64]>,
    n_levels: usize,
) -> Result<Streamlines, Error> {
    let field = stream_function(prof, bbox)?;
    let levels = match levels {
        Some(l) => {
            if l.iter().any(|v| !v.is_finite()) || l.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Domain(
                    "contour levels must be finite and increasing".into(),
                ));
            }
            l.to_vec()
        }
        None => field.quantile_levels(n_levels),
    };
    let mut lines = Vec::new();
    let mut max_defect = 0.0f64;
    for (k, &lv) in levels.iter().enumerate() {
        for line in field.contour(prof, lv) {
            if line.len() < 2 {
                continue;
            }
            if let Some(d) = tangency_defect(prof, &line) {
                max_defect = max_defect.max(d);
            }
            lines.push((k, line));
        }
    }
    Ok(Streamlines {
        bbox,
        levels,
        lines,
        max_defect,
    })
}
