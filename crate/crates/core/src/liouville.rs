//! (-1)-homogeneous solutions from locally univalent meromorphic functions.
//!
//! For such an `f` on the Riemann sphere, `phi = ln(|f'|^2 (1 + |z|^2)^2 /
//! (1 + |f|^2)^2)` solves `-Lap phi + 2 = 2 e^phi` on the unit sphere, and
//! `u = grad phi - (Lap phi) e_r` is a (-1)-homogeneous solution with
//! `nu = 1`.
//!
//! The chart is the stereographic projection from the north pole,
//! `z = cot(theta / 2) e^(i phi)`. The sphere Laplacian is
//! `(1 + |z|^2)^2 / 4` times the flat one.

use num_complex::Complex;

use crate::closedform::ClosedForm;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeromorphicSpec<T> {
    /// `a z`
    Linear { a: Complex<T> },
    /// `a z^alpha` (principal branch; only `|f|` and `f''/f'` enter `phi`)
    Power { a: Complex<T>, alpha: T },
    /// `a e^(b z)`
    Exponential { a: Complex<T>, b: Complex<T> },
}

/// `(f, f', f''/f')`.
type Jet<T> = (Complex<T>, Complex<T>, Complex<T>);

impl<T: Real> MeromorphicSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let zero = Complex::new(T::zero(), T::zero());
        match *self {
            Self::Linear { a } | Self::Exponential { a, .. } if a == zero => {
                Err(Error::Domain("a must be nonzero".into()))
            }
            Self::Power { a, alpha } if a == zero || alpha == T::zero() => {
                Err(Error::Domain("a and alpha must be nonzero".into()))
            }
            Self::Exponential { b, .. } if b == zero => {
                Err(Error::Domain("b must be nonzero".into()))
            }
            _ => Ok(()),
        }
    }

    fn jet(&self, z: Complex<T>) -> Result<Jet<T>> {
        self.validate()?;
        let one = T::one();
        match *self {
            Self::Linear { a } => Ok((a * z, a, Complex::new(T::zero(), T::zero()))),
            Self::Power { a, alpha } => {
                if z.norm() < T::lit(1e-300) {
                    return Err(Error::SingularPoint);
                }
                let za = z.powf(alpha);
                let f = a * za;
                let fp = a * za * alpha / z;
                if alpha != one && fp.norm() == T::zero() {
                    return Err(Error::SingularPoint);
                }
                Ok((f, fp, Complex::new(alpha - one, T::zero()) / z))
            }
            Self::Exponential { a, b } => {
                let e = (b * z).exp();
                Ok((a * e, a * b * e, b))
            }
        }
    }
}

/// A point away from the poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> SpherePoint<T> {
    pub fn new(theta: T, phi: T) -> Result<Self> {
        if !(theta > T::zero() && theta < T::PI()) {
            return Err(Error::Domain(format!("theta = {theta} outside (0, pi)")));
        }
        Ok(Self { theta, phi })
    }

    /// Stereographic coordinate.
    pub fn chart(&self) -> Complex<T> {
        let rho = T::one() / (self.theta * T::lit(0.5)).tan();
        Complex::from_polar(rho, self.phi)
    }

    pub fn from_chart(z: Complex<T>) -> Result<Self> {
        let (rho, phi) = z.to_polar();
        Self::new(T::lit(2.0) * (T::one() / rho).atan(), phi)
    }
}

/// Velocity in the `(e_r, e_theta, e_phi)` frame at `r = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity<T> {
    pub r: T,
    pub theta: T,
    pub phi: T,
}

/// Tensor grid in `(theta, phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartGrid<T> {
    pub theta: Vec<T>,
    pub phi: Vec<T>,
}

impl<T: Real> ChartGrid<T> {
    /// `n_theta` polar angles spanning `[margin, pi - margin]` and `n_phi`
    /// meridians spanning `[0, 2 pi)`.
    pub fn uniform(n_theta: usize, n_phi: usize, margin: T) -> Result<Self> {
        if n_theta < 2 || n_phi < 1 || !(margin > T::zero()) {
            return Err(Error::Domain(
                "grid needs n_theta >= 2, n_phi >= 1, margin > 0".into(),
            ));
        }
        let span = T::PI() - margin - margin;
        let theta = (0..n_theta)
            .map(|i| margin + span * T::from_usize_lossy(i) / T::from_usize_lossy(n_theta - 1))
            .collect();
        let phi = (0..n_phi)
            .map(|j| T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(n_phi))
            .collect();
        Ok(Self { theta, phi })
    }

    pub fn points(&self) -> impl Iterator<Item = Result<SpherePoint<T>>> + '_ {
        self.theta
            .iter()
            .flat_map(move |&t| self.phi.iter().map(move |&p| SpherePoint::new(t, p)))
    }
}

fn log_phi<T: Real>(f: &MeromorphicSpec<T>, z: Complex<T>) -> Result<(T, Jet<T>)> {
    let jet = f.jet(z)?;
    let (fz, fp, _) = jet;
    let a = fp.norm_sqr();
    if !(a > T::zero()) || !a.is_finite() || !fz.norm_sqr().is_finite() {
        return Err(Error::SingularPoint);
    }
    let one = T::one();
    let two = T::lit(2.0);
    let v = a.ln() + two * (one + z.norm_sqr()).ln() - two * (one + fz.norm_sqr()).ln();
    Ok((v, jet))
}

/// `phi` at a point.
pub fn liouville_phi<T: Real>(f: &MeromorphicSpec<T>, pt: &SpherePoint<T>) -> Result<T> {
    log_phi(f, pt.chart()).map(|r| r.0)
}

/// `phi` as a function of the chart coordinate.
pub fn liouville_phi_chart<T: Real>(f: &MeromorphicSpec<T>, z: Complex<T>) -> Result<T> {
    log_phi(f, z).map(|r| r.0)
}

/// `(phi, d phi / dz, sphere Laplacian of phi)` with analytic derivatives.
fn phi_derivs<T: Real>(f: &MeromorphicSpec<T>, z: Complex<T>) -> Result<(T, Complex<T>, T)> {
    let (v, (fz, fp, q)) = log_phi(f, z)?;
    let one = T::one();
    let two = T::lit(2.0);
    let nz = one + z.norm_sqr();
    let nf = one + fz.norm_sqr();
    let dz = q + z.conj() * (two / nz) - fz.conj() * fp * (two / nf);
    let lap_flat = T::lit(8.0) / (nz * nz) - T::lit(8.0) * fp.norm_sqr() / (nf * nf);
    Ok((v, dz, nz * nz * T::lit(0.25) * lap_flat))
}

/// `u = grad phi - (Lap phi) e_r` at a point.
pub fn liouville_velocity<T: Real>(
    f: &MeromorphicSpec<T>,
    pt: &SpherePoint<T>,
) -> Result<Velocity<T>> {
    let z = pt.chart();
    let (_, dz, lap) = phi_derivs(f, z)?;
    // phi_x - i phi_y = 2 d phi / dz
    let px = dz.re + dz.re;
    let py = -(dz.im + dz.im);
    let s = (T::one() + z.norm_sqr()) * T::lit(0.5);
    let (sn, cs) = pt.phi.sin_cos();
    Ok(Velocity {
        r: -lap,
        theta: -s * (cs * px + sn * py),
        phi: s * (-sn * px + cs * py),
    })
}

/// Max over the grid of `|-Lap phi + 2 - 2 e^phi|` with the analytic
/// Laplacian.
pub fn liouville_residual<T: Real>(f: &MeromorphicSpec<T>, grid: &ChartGrid<T>) -> Result<T> {
    let two = T::lit(2.0);
    let mut worst = T::zero();
    for pt in grid.points() {
        let (v, _, lap) = phi_derivs(f, pt?.chart())?;
        worst = worst.max((-lap + two - two * v.exp()).abs());
    }
    Ok(worst)
}

/// As [`liouville_residual`], with the flat Laplacian replaced by a
/// fourth-order central difference of `phi` with chart step
/// `h * (1 + |z|)`.
pub fn liouville_residual_fd<T: Real>(
    f: &MeromorphicSpec<T>,
    grid: &ChartGrid<T>,
    h: T,
) -> Result<T> {
    let two = T::lit(2.0);
    let w = [
        T::lit(-1.0 / 12.0),
        T::lit(4.0 / 3.0),
        T::lit(-5.0 / 2.0),
        T::lit(4.0 / 3.0),
        T::lit(-1.0 / 12.0),
    ];
    let mut worst = T::zero();
    for pt in grid.points() {
        let z = pt?.chart();
        let hs = h * (T::one() + z.norm());
        let mut lap = T::zero();
        for (k, &wk) in w.iter().enumerate() {
            let o = T::from_usize_lossy(k) - two;
            let dx = liouville_phi_chart(f, z + Complex::new(o * hs, T::zero()))?;
            let dy = liouville_phi_chart(f, z + Complex::new(T::zero(), o * hs))?;
            lap = lap + wk * (dx + dy);
        }
        lap = lap / (hs * hs);
        let nz = T::one() + z.norm_sqr();
        let lap_s = nz * nz * T::lit(0.25) * lap;
        let v = liouville_phi_chart(f, z)?;
        worst = worst.max((-lap_s + two - two * v.exp()).abs());
    }
    Ok(worst)
}

/// Largest variance over `phi` samples, across the three velocity
/// components, on each latitude of the grid.
pub fn meridian_variance<T: Real>(f: &MeromorphicSpec<T>, grid: &ChartGrid<T>) -> Result<T> {
    let n = T::from_usize_lossy(grid.phi.len());
    let mut worst = T::zero();
    for &th in &grid.theta {
        let vs: Vec<Velocity<T>> = grid
            .phi
            .iter()
            .map(|&p| liouville_velocity(f, &SpherePoint::new(th, p)?))
            .collect::<Result<_>>()?;
        let var = |g: &dyn Fn(&Velocity<T>) -> T| {
            let m = vs.iter().map(g).fold(T::zero(), |a, b| a + b) / n;
            vs.iter()
                .map(|v| (g(v) - m) * (g(v) - m))
                .fold(T::zero(), |a, b| a + b)
                / n
        };
        worst = worst
            .max(var(&|v| v.r))
            .max(var(&|v| v.theta))
            .max(var(&|v| v.phi));
    }
    Ok(worst)
}

/// The Landau solution generated by `f = a z`: `u_theta sin(theta)` and
/// `u_r` of the Liouville field equal `U(cos theta)` and `U'(cos theta)`.
pub fn landau_for_linear<T: Real>(a: Complex<T>) -> Result<ClosedForm<T>> {
    let m = a.norm_sqr();
    if m == T::one() {
        return Err(Error::Domain("|a| = 1 gives the zero solution".into()));
    }
    let gamma = T::lit(2.0) * (m - T::one()) / (m + T::one());
    let c = ClosedForm::Landau {
        nu: T::one(),
        gamma,
    };
    c.validate()?;
    Ok(c)
}
