//! Sampled meridional profiles `U(y)` and the fields derived from them.

use crate::params::{Endpoint, FlowParams};
use crate::Real;

/// Where a profile ends on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndState<T> {
    /// The solution extends to the pole.
    Reaches,
    /// `|U| -> infinity` at this ordinate.
    BlowUp(T),
    /// Not explored beyond this ordinate.
    Open(T),
}

impl<T: Real> EndState<T> {
    pub fn reaches(&self) -> bool {
        matches!(self, EndState::Reaches)
    }
}

/// Maximal interval of existence `(y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<T> {
    pub left: EndState<T>,
    pub right: EndState<T>,
}

impl<T: Real> Domain<T> {
    pub fn global() -> Self {
        Self {
            left: EndState::Reaches,
            right: EndState::Reaches,
        }
    }

    pub fn is_global(&self) -> bool {
        self.left.reaches() && self.right.reaches()
    }

    pub fn y0(&self) -> T {
        match self.left {
            EndState::Reaches => -T::one(),
            EndState::BlowUp(y) | EndState::Open(y) => y,
        }
    }

    pub fn y1(&self) -> T {
        match self.right {
            EndState::Reaches => T::one(),
            EndState::BlowUp(y) | EndState::Open(y) => y,
        }
    }

    pub fn reaches(&self, end: Endpoint) -> bool {
        match end {
            Endpoint::Minus1 => self.left.reaches(),
            Endpoint::Plus1 => self.right.reaches(),
        }
    }

    pub fn contains(&self, y: T) -> bool {
        y > self.y0() && y < self.y1()
    }
}

/// `U_theta = u_theta sin(theta)` sampled on an ascending grid in `(y0, y1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    pub params: FlowParams<T>,
    pub y: Vec<T>,
    pub u: Vec<T>,
    /// `dU/dy` at the samples, when the producer knows it more accurately
    /// than differencing would.
    pub du: Option<Vec<T>>,
    pub domain: Domain<T>,
}

/// Distances from a pole used for the endpoint tails: four per octave from
/// `0.05` down to [`Real::tail_floor`].
pub fn tail_distances<T: Real>() -> Vec<T> {
    let mut out = Vec::new();
    let start = T::lit(0.05);
    let ratio = T::lit(2f64.powf(-0.25));
    let floor = T::tail_floor();
    let mut t = start * ratio;
    while t >= floor {
        out.push(t);
        t = t * ratio;
    }
    out
}

/// Standard sampling grid: `n_interior` uniform points on `[-0.95, 0.95]`
/// plus geometric tails toward both poles.
pub fn standard_grid<T: Real>(n_interior: usize) -> Vec<T> {
    let n = n_interior.max(2);
    let edge = T::lit(0.95);
    let tails = tail_distances::<T>();
    let mut y: Vec<T> = tails
        .iter()
        .rev()
        .map(|&t| Endpoint::Minus1.inner(t))
        .collect();
    for i in 0..n {
        let s = T::from_usize_lossy(i) / T::from_usize_lossy(n - 1);
        y.push(-edge + (edge + edge) * s);
    }
    y.extend(tails.iter().map(|&t| Endpoint::Plus1.inner(t)));
    y
}

/// Default interior resolution.
pub const DEFAULT_INTERIOR: usize = 381;

/// Fornberg finite-difference weights for the `m`-th derivative at `x0`.
pub fn fd_weights<T: Real>(x0: T, xs: &[T], m: usize) -> Vec<T> {
    let n = xs.len();
    let mut c = vec![vec![T::zero(); m + 1]; n];
    c[0][0] = T::one();
    let mut c1 = T::one();
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kf = T::from_usize_lossy(k);
                    c[i][k] = c1 * (kf * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                let kf = T::from_usize_lossy(k);
                c[j][k] = (c4 * c[j][k] - kf * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// First derivative of samples on an arbitrary grid with five-point
/// stencils, centred in the interior and one-sided at the ends.
pub fn derivative<T: Real>(x: &[T], f: &[T]) -> Vec<T> {
    let n = x.len();
    let w = 5.min(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = if i < w / 2 {
            0
        } else if i + w / 2 >= n {
            n - w
        } else {
            i - w / 2
        };
        let xs = &x[lo..lo + w];
        let wts = fd_weights(x[i], xs, 1);
        let mut d = T::zero();
        for k in 0..w {
            d = d + wts[k] * f[lo + k];
        }
        out.push(d);
    }
    out
}

/// Aitken's delta-squared extrapolation of the last three terms of a
/// sequence. Falls back to the last term when the differences are not
/// geometric.
pub fn aitken<T: Real>(a0: T, a1: T, a2: T) -> T {
    let d1 = a1 - a0;
    let d2 = a2 - a1;
    let den = d2 - d1;
    if den == T::zero() || !(d2 / den).is_finite() || (d1 * d2) <= T::zero() {
        return a2;
    }
    let est = a2 - d2 * d2 / den;
    if (est - a2).abs() > d2.abs() * T::lit(1e3) {
        a2
    } else {
        est
    }
}

impl<T: Real> Profile<T> {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Derivative samples: the stored ones or five-point differences.
    pub fn slopes(&self) -> Vec<T> {
        match &self.du {
            Some(d) => d.clone(),
            None => derivative(&self.y, &self.u),
        }
    }

    /// Cubic Hermite interpolation of `(U, U')` at `y`. Returns `None`
    /// outside the sampled range.
    pub fn eval_with_slopes(&self, slopes: &[T], y: T) -> Option<(T, T)> {
        let n = self.y.len();
        if n < 2 || y < self.y[0] || y > self.y[n - 1] {
            return None;
        }
        let i = match self.y.binary_search_by(|v| v.partial_cmp(&y).unwrap()) {
            Ok(i) => return Some((self.u[i], slopes[i])),
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.y[i], self.y[i + 1]);
        let h = x1 - x0;
        let s = (y - x0) / h;
        let (f0, f1) = (self.u[i], self.u[i + 1]);
        let (d0, d1) = (slopes[i] * h, slopes[i + 1] * h);
        let one = T::one();
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = two * s3 - three * s2 + one;
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        let val = h00 * f0 + h10 * d0 + h01 * f1 + h11 * d1;
        let dh00 = T::lit(6.0) * (s2 - s);
        let dh10 = three * s2 - T::lit(4.0) * s + one;
        let dh01 = -dh00;
        let dh11 = three * s2 - two * s;
        let der = (dh00 * f0 + dh10 * d0 + dh01 * f1 + dh11 * d1) / h;
        Some((val, der))
    }

    pub fn eval(&self, y: T) -> Option<T> {
        let s = self.slopes();
        self.eval_with_slopes(&s, y).map(|v| v.0)
    }

    /// Largest Riccati residual over samples with `lo <= y <= hi`.
    pub fn max_residual(&self, lo: T, hi: T) -> T {
        let d = self.slopes();
        let mut worst = T::zero();
        for i in 0..self.y.len() {
            let y = self.y[i];
            if y < lo || y > hi {
                continue;
            }
            worst = worst.max(self.params.residual(y, self.u[i], d[i]).abs());
        }
        worst
    }

    /// Samples within distance `t_max` of an endpoint, ordered from the
    /// pole inward, as `(t, U, U')`.
    pub fn tail(&self, end: Endpoint, t_max: T) -> Vec<(T, T, T)> {
        let d = self.slopes();
        let mut out: Vec<(T, T, T)> = (0..self.y.len())
            .filter_map(|i| {
                let t = end.dist(self.y[i]);
                (t <= t_max).then_some((t, self.u[i], d[i]))
            })
            .collect();
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }

    /// Samples with `lo <= y <= hi`.
    pub fn window(&self, lo: T, hi: T) -> Vec<(T, T)> {
        self.y
            .iter()
            .zip(self.u.iter())
            .filter(|(y, _)| **y >= lo && **y <= hi)
            .map(|(&y, &u)| (y, u))
            .collect()
    }
}

/// Velocity and pressure on a `theta` grid at `r = 1`. The swirl component
/// is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField<T> {
    pub theta: Vec<T>,
    pub u_r: Vec<T>,
    pub u_theta: Vec<T>,
    pub u_phi: Vec<T>,
    pub p: Vec<T>,
    /// Constant added to `nu u_r - u_theta^2 / 2` to obtain `p`.
    pub p_const: T,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_increasing_and_inside() {
        let g: Vec<f64> = standard_grid(DEFAULT_INTERIOR);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] > -1.0 && *g.last().unwrap() < 1.0);
        assert!(1.0 + g[0] < 3e-14);
    }

    #[test]
    fn fornberg_central_weights() {
        let xs = [-2.0f64, -1.0, 0.0, 1.0, 2.0];
        let w = fd_weights(0.0, &xs, 1);
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_of_quartic_is_exact() {
        let x: Vec<f64> = (0..12).map(|i| (i as f64 * 0.37).powf(1.3)).collect();
        let f: Vec<f64> = x.iter().map(|v| v.powi(4) - 2.0 * v).collect();
        let d = derivative(&x, &f);
        for (xi, di) in x.iter().zip(d.iter()) {
            let e = 4.0 * xi.powi(3) - 2.0;
            assert!((di - e).abs() < 1e-9 * e.abs().max(1.0));
        }
    }

    #[test]
    fn aitken_geometric() {
        let s = |k: i32| 3.0 + 0.5f64.powi(k);
        assert!((aitken(s(1), s(2), s(3)) - 3.0).abs() < 1e-14);
    }
}
