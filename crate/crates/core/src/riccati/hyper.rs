use super::SolveRequest;
use crate::error::domain;
use crate::profile::{standard_grid, Domain, EndState, Profile, DEFAULT_INTERIOR};
use crate::specfun::hyp2f1_complex;
use crate::{Error, Real, Result};
use num_complex::Complex;

/// Distance of `C` from an integer treated as integral.
pub const DEGENERATE_C_TOL: f64 = 1e-6;

/// `(xi, dxi/dz)` for one fundamental solution at `z`.
type Pair<T> = (T, T);

struct Basis<T> {
    a: Complex<T>,
    b: Complex<T>,
    c: T,
    ab: T,
}

impl<T: Real> Basis<T> {
    fn f(&self, da: T, dc: T, z: T) -> Result<T> {
        let one = Complex::new(da, T::zero());
        let v = hyp2f1_complex(self.a + one, self.b + one, self.c + dc, z)?;
        if v.im.abs() > T::lit(1e-10) * v.re.abs().max(T::one()) {
            return Err(Error::NoConvergence(format!(
                "imaginary part {} in 2F1",
                v.im
            )));
        }
        Ok(v.re)
    }

    /// `F(A, B; C; z)` and its derivative `(AB / C) F(A+1, B+1; C+1; z)`.
    fn eval(&self, z: T) -> Result<Pair<T>> {
        let f = self.f(T::zero(), T::zero(), z)?;
        let df = self.ab / self.c * self.f(T::one(), T::one(), z)?;
        Ok((f, df))
    }
}

/// The Riccati solution from the hypergeometric representation in
/// `z = (1 + y) / 2`:
/// `U = a (1 - y) + b (1 + y) + nu (1 - y^2) xi'(z) / xi(z)`, where
/// `xi = D xi1 + xi2` with `xi1 = F(A, B; C; z)` and
/// `xi2 = z^(1-C) F(1+A-C, 1+B-C; 2-C; z)`.
///
/// The profile is sampled on the interior part (`|y| <= 0.95`) of the
/// standard grid, or on the request grid, and truncated at the first sign
/// change of `xi` on either side of `ybar`.
pub fn hypergeom_rep<T: Real>(req: &SolveRequest<T>) -> Result<Profile<T>> {
    let p = req.params;
    let nu = p.nu;
    let n2 = nu * nu;
    if p.c1 < -n2 || p.c2 < -n2 {
        return Err(Error::OutOfScope(
            "hypergeometric form needs c1, c2 >= -nu^2".into(),
        ));
    }
    let yb = req.ybar;
    if !(yb > -T::one() && yb < T::one()) {
        return domain(format!("ybar = {yb} outside (-1, 1)"));
    }
    let m = p.hyp_map()?;
    let c = m.c;
    if (c - c.round()).abs() < T::lit(DEGENERATE_C_TOL) {
        return Err(Error::DegenerateC);
    }
    let (ca, cb) = m.ab.as_complex();
    let shift = Complex::new(T::one() - c, T::zero());
    let b1 = Basis {
        a: ca,
        b: cb,
        c,
        ab: m.ab.product(),
    };
    let sa = ca + shift;
    let sb = cb + shift;
    let b2 = Basis {
        a: sa,
        b: sb,
        c: T::lit(2.0) - c,
        ab: (sa * sb).re,
    };
    let one = T::one();
    let half = T::lit(0.5);
    let xi = |z: T| -> Result<(Pair<T>, Pair<T>)> {
        let x1 = b1.eval(z)?;
        let (g, dg) = b2.eval(z)?;
        let pw = z.powf(one - c);
        let x2 = (pw * g, (one - c) * pw / z * g + pw * dg);
        Ok((x1, x2))
    };
    let base = |y: T| m.a * (one - y) + m.b * (one + y);
    let zb = (one + yb) * half;
    let mu = (req.gamma - base(yb)) / (nu * (one - yb) * (one + yb));
    let ((f1, d1), (f2, d2)) = xi(zb)?;
    // xi = n1 xi1 + n2 xi2, a finite multiple of D xi1 + xi2
    let (k1, k2) = (-(d2 - mu * f2), d1 - mu * f1);

    let grid: Vec<T> = match &req.grid {
        Some(g) => g.clone(),
        None => standard_grid::<T>(DEFAULT_INTERIOR)
            .into_iter()
            .filter(|y| y.abs() <= T::lit(0.95))
            .collect(),
    };
    let mut pts: Vec<(T, T, T)> = Vec::with_capacity(grid.len() + 1);
    for &y in &grid {
        let z = (one + y) * half;
        let ((f1, d1), (f2, d2)) = xi(z)?;
        let w = k1 * f1 + k2 * f2;
        let dw = k1 * d1 + k2 * d2;
        pts.push((y, w, dw));
    }
    let ib = pts.partition_point(|q| q.0 < yb);
    if pts.get(ib).map(|q| q.0) != Some(yb) {
        let w = k1 * f1 + k2 * f2;
        let dw = k1 * d1 + k2 * d2;
        pts.insert(ib, (yb, w, dw));
    }
    let sgn = pts[ib].1 > T::zero();
    let mut lo = ib;
    while lo > 0 && (pts[lo - 1].1 > T::zero()) == sgn && pts[lo - 1].1 != T::zero() {
        lo -= 1;
    }
    let mut hi = ib;
    while hi + 1 < pts.len() && (pts[hi + 1].1 > T::zero()) == sgn && pts[hi + 1].1 != T::zero() {
        hi += 1;
    }
    let secant = |i: usize, j: usize| {
        let (ya, wa, _) = pts[i];
        let (yb, wb, _) = pts[j];
        ya - wa * (yb - ya) / (wb - wa)
    };
    let left = if lo > 0 {
        EndState::BlowUp(secant(lo - 1, lo))
    } else {
        EndState::Open(pts[lo].0)
    };
    let right = if hi + 1 < pts.len() {
        EndState::BlowUp(secant(hi, hi + 1))
    } else {
        EndState::Open(pts[hi].0)
    };
    let keep = &pts[lo..=hi];
    Ok(Profile {
        params: p,
        y: keep.iter().map(|q| q.0).collect(),
        u: keep
            .iter()
            .map(|&(y, w, dw)| base(y) + nu * (one - y) * (one + y) * dw / w)
            .collect(),
        du: None,
        domain: Domain { left, right },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::FlowParams;

    #[test]
    fn integer_c_is_degenerate() {
        let p = FlowParams::new(1.0f64, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(
            hypergeom_rep(&SolveRequest::new(p, 0.0, 0.0)),
            Err(Error::DegenerateC)
        );
    }

    #[test]
    fn below_admissible_range_is_out_of_scope() {
        let p = FlowParams::new(1.0f64, -2.0, 0.0, 0.5).unwrap();
        assert!(matches!(
            hypergeom_rep(&SolveRequest::new(p, 0.0, 0.0)),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn reproduces_initial_value() {
        let p = FlowParams::new(1.0f64, -0.5, 8.0, -6.0).unwrap();
        let prof = hypergeom_rep(&SolveRequest::new(p, 0.0, 0.7)).unwrap();
        let i = prof.y.iter().position(|&y| y == 0.0).unwrap();
        assert!((prof.u[i] - 0.7).abs() < 1e-12);
    }
}
