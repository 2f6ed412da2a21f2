//! Explicit solution families and recovery of the full field from a
//! profile.
//!
//! Each family is a [`ClosedForm`] that can be evaluated pointwise and
//! sampled into a [`Profile`]:
//!
//! | family | `U(y)` | coefficients |
//! |---|---|---|
//! | Landau | `2 nu (1 - y^2) / (y + 2 nu / gamma)` | `c = 0` |
//! | one singular pole | three branches in `tau` vs `2 nu` | `c2 = 0`, `c1 = -2 c3` |
//! | critical | `(nu + s1)(1 - y) - (nu + s2)(1 + y)` | `c3 = bar_c3` |
//! | elliptic | ratio of complete elliptic integrals | `nu = 1`, `c = (0, 0, 1/2)` |
//! | Euler-NS | `a y + b` | induced by `(nu, a, b)` |

use crate::error::domain;
use crate::params::{bar_c3, Endpoint, FlowParams};
use crate::profile::{derivative, standard_grid, Domain, FlowField, Profile, DEFAULT_INTERIOR};
use crate::specfun::{ellip_b, ellip_e, ellip_k};
use crate::{Error, Real, Result};

/// Parameter of the elliptic family; `Infinity` selects the lower solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha<T> {
    Finite(T),
    Infinity,
}

/// One member of an explicit family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm<T> {
    Landau { nu: T, gamma: T },
    OneSing { nu: T, tau: T, sigma: T },
    Critical { nu: T, c1: T, c2: T },
    Elliptic { alpha: Alpha<T> },
    EulerNs { nu: T, a: T, b: T },
}

/// Whether `(tau, sigma)` lies in the one-singularity parameter set.
pub fn in_i_nu<T: Real>(nu: T, tau: T, sigma: T) -> bool {
    let two_nu = nu + nu;
    let quarter = T::lit(0.25);
    let slack = T::epsilon() * T::lit(4.0) * tau.abs().max(T::one());
    (tau <= two_nu && sigma < nu - tau * quarter)
        || (tau >= two_nu && (sigma - tau * quarter).abs() <= slack)
}

/// Value of the elliptic family at `y = 0` as a function of `alpha`.
pub fn elliptic_gamma<T: Real>(alpha: Alpha<T>) -> T {
    let half = T::lit(0.5);
    let k = ellip_k(half).expect("K(1/2)");
    let e = ellip_e(half).expect("E(1/2)");
    let g0 = k / (e + e - k);
    match alpha {
        Alpha::Finite(a) => g0 * (T::one() - a) / (T::one() + a),
        Alpha::Infinity => -g0,
    }
}

/// Inverse of [`elliptic_gamma`].
pub fn elliptic_alpha_for_gamma<T: Real>(gamma: T) -> Alpha<T> {
    let g0 = elliptic_gamma(Alpha::Finite(T::zero()));
    if gamma == -g0 {
        Alpha::Infinity
    } else {
        Alpha::Finite((g0 - gamma) / (g0 + gamma))
    }
}

impl<T: Real> ClosedForm<T> {
    /// Checks the family's parameter constraints.
    pub fn validate(&self) -> Result<()> {
        match *self {
            ClosedForm::Landau { nu, gamma } => {
                check_nu(nu)?;
                if gamma == T::zero() || gamma.abs() >= nu + nu {
                    return domain(format!("Landau needs 0 < |gamma| < 2 nu (gamma = {gamma})"));
                }
            }
            ClosedForm::OneSing { nu, tau, sigma } => {
                check_nu(nu)?;
                if !in_i_nu(nu, tau, sigma) {
                    return domain(format!("(tau, sigma) = ({tau}, {sigma}) outside I_nu"));
                }
            }
            ClosedForm::Critical { nu, c1, c2 } => {
                check_nu(nu)?;
                bar_c3(c1, c2, nu)?;
            }
            ClosedForm::Elliptic { alpha } => {
                if let Alpha::Finite(a) = alpha {
                    if !(a >= T::zero()) {
                        return domain("elliptic family needs alpha in [0, inf]");
                    }
                }
            }
            ClosedForm::EulerNs { nu, .. } => check_nu(nu)?,
        }
        Ok(())
    }

    /// Coefficients of the Riccati equation this member solves.
    pub fn params(&self) -> FlowParams<T> {
        let half = T::lit(0.5);
        let quarter = T::lit(0.25);
        match *self {
            ClosedForm::Landau { nu, .. } => FlowParams {
                nu,
                c1: T::zero(),
                c2: T::zero(),
                c3: T::zero(),
            },
            ClosedForm::OneSing { nu, tau, .. } => {
                let c1 = tau * (tau - T::lit(4.0) * nu) * quarter;
                FlowParams {
                    nu,
                    c1,
                    c2: T::zero(),
                    c3: -c1 * half,
                }
            }
            ClosedForm::Critical { nu, c1, c2 } => FlowParams {
                nu,
                c1,
                c2,
                c3: bar_c3(c1, c2, nu).unwrap_or(T::nan()),
            },
            ClosedForm::Elliptic { .. } => FlowParams {
                nu: T::one(),
                c1: T::zero(),
                c2: T::zero(),
                c3: half,
            },
            ClosedForm::EulerNs { nu, a, b } => {
                // match nu (1 - y^2) a + 2 nu y (a y + b) + (a y + b)^2 / 2
                let k0 = nu * a + b * b * half;
                let k1 = T::lit(2.0) * nu * b + a * b;
                let k2 = nu * a + a * a * half;
                let c3 = -k2;
                let sum12 = k0 - c3;
                FlowParams {
                    nu,
                    c1: (sum12 - k1) * half,
                    c2: (sum12 + k1) * half,
                    c3,
                }
            }
        }
    }

    /// `U(y)` for `y` in `(-1, 1)`.
    pub fn eval(&self, y: T) -> T {
        let one = T::one();
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        match *self {
            ClosedForm::Landau { nu, gamma } => two * nu * (one - y * y) / (y + two * nu / gamma),
            ClosedForm::OneSing { nu, tau, sigma } => one_sing_eval(nu, tau, sigma, y),
            ClosedForm::Critical { nu, c1, c2 } => {
                let s1 = (nu * nu + c1).sqrt();
                let s2 = (nu * nu + c2).sqrt();
                (nu + s1) * (one - y) - (nu + s2) * (one + y)
            }
            ClosedForm::Elliptic { alpha } => {
                // E(m) - (1 - m) K(m) = m B(m) keeps the poles free of cancellation
                let p = (one + y) * half; // cos^2(theta/2)
                let q = (one - y) * half; // sin^2(theta/2)
                let kp = ellip_k(p).unwrap_or(T::nan());
                let bp = ellip_b(p).unwrap_or(T::nan());
                let kq = ellip_k(q).unwrap_or(T::nan());
                let bq = ellip_b(q).unwrap_or(T::nan());
                match alpha {
                    Alpha::Finite(a) => two * p * q * (kp - a * kq) / (p * bp + a * q * bq),
                    Alpha::Infinity => -two * p * kq / bq,
                }
            }
            ClosedForm::EulerNs { a, b, .. } => a * y + b,
        }
    }

    /// `U'(y)` from the closed form.
    pub fn deriv(&self, y: T) -> T {
        let one = T::one();
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        let quarter = T::lit(0.25);
        match *self {
            ClosedForm::Landau { nu, gamma } => {
                let k = two * nu / gamma;
                -two * nu * (y * y + two * k * y + one) / ((y + k) * (y + k))
            }
            ClosedForm::OneSing { nu, tau, sigma } => one_sing_deriv(nu, tau, sigma, y),
            ClosedForm::Critical { nu, c1, c2 } => {
                let s1 = (nu * nu + c1).sqrt();
                let s2 = (nu * nu + c2).sqrt();
                -(nu + s1) - (nu + s2)
            }
            ClosedForm::Elliptic { alpha } => {
                let p = (one + y) * half;
                let q = (one - y) * half;
                let k = |m: T| ellip_k(m).unwrap_or(T::nan());
                let b = |m: T| ellip_b(m).unwrap_or(T::nan());
                // dK/dm = B / (2 (1 - m)); d(m B)/dm = K / 2
                let dk = |m: T| b(m) / (two * (one - m));
                let (n, dn, d) = match alpha {
                    Alpha::Finite(a) => (
                        k(p) - a * k(q),
                        half * (dk(p) + a * dk(q)),
                        p * b(p) + a * q * b(q),
                    ),
                    Alpha::Infinity => (-k(q), half * dk(q), q * b(q)),
                };
                let dd = quarter * n;
                (q - p) * n / d + two * p * q * (dn * d - n * dd) / (d * d)
            }
            ClosedForm::EulerNs { a, .. } => a,
        }
    }

    /// Samples on the standard grid.
    pub fn profile(&self) -> Result<Profile<T>> {
        self.profile_on(&standard_grid(DEFAULT_INTERIOR))
    }

    pub fn profile_on(&self, grid: &[T]) -> Result<Profile<T>> {
        self.validate()?;
        let u: Vec<T> = grid.iter().map(|&y| self.eval(y)).collect();
        let du: Vec<T> = grid.iter().map(|&y| self.deriv(y)).collect();
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("closed form not finite on the grid".into()));
        }
        Ok(Profile {
            params: self.params(),
            y: grid.to_vec(),
            u,
            du: Some(du),
            domain: Domain::global(),
        })
    }
}

fn check_nu<T: Real>(nu: T) -> Result<()> {
    if nu > T::zero() && nu.is_finite() {
        Ok(())
    } else {
        domain(format!("viscosity must be positive (got {nu})"))
    }
}

fn one_sing_eval<T: Real>(nu: T, tau: T, sigma: T, y: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let two_nu = nu + nu;
    let b = (one - tau / two_nu).abs();
    let s = two * sigma / nu;
    let x = (one + y) / two; // (1 + cos theta) / 2
    let base = nu * (one - y);
    if tau < two_nu {
        let den = (one - s + b) * x.powf(-b) + s - one + b;
        base * (one - b - two * b * (one - s - b) / den)
    } else if tau == two_nu {
        base * (one + two * (one - s) / ((one - s) * x.ln() - two))
    } else {
        base * (one + b)
    }
}

fn one_sing_deriv<T: Real>(nu: T, tau: T, sigma: T, y: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let two_nu = nu + nu;
    let b = (one - tau / two_nu).abs();
    let s = two * sigma / nu;
    let x = (one + y) / two;
    let base = nu * (one - y);
    // U = base g(x), dx/dy = 1/2
    let (g, dg) = if tau < two_nu {
        let a = one - s + b;
        let den = a * x.powf(-b) + s - one + b;
        let dden = -b * a * x.powf(-b - one);
        let k = two * b * (one - s - b);
        (one - b - k / den, k * dden / (den * den))
    } else if tau == two_nu {
        let l = (one - s) * x.ln() - two;
        (
            one + two * (one - s) / l,
            -two * (one - s) * (one - s) / (x * l * l),
        )
    } else {
        (one + b, T::zero())
    };
    -nu * g + base * dg * half
}

pub fn landau_profile<T: Real>(nu: T, gamma: T) -> Result<Profile<T>> {
    ClosedForm::Landau { nu, gamma }.profile()
}

pub fn one_sing_profile<T: Real>(nu: T, tau: T, sigma: T) -> Result<Profile<T>> {
    ClosedForm::OneSing { nu, tau, sigma }.profile()
}

pub fn critical_profile<T: Real>(nu: T, c1: T, c2: T) -> Result<Profile<T>> {
    ClosedForm::Critical { nu, c1, c2 }.profile()
}

pub fn elliptic_profile<T: Real>(alpha: Alpha<T>) -> Result<Profile<T>> {
    ClosedForm::Elliptic { alpha }.profile()
}

/// The Euler-NS family `U = a y + b` with `u_r = a` and the pressure
/// `p = -(a^2 + b^2 + 2 a b cos(theta)) / (2 sin^2(theta))`.
pub fn euler_ns_profile<T: Real>(
    nu: T,
    a: T,
    b: T,
    theta: &[T],
) -> Result<(Profile<T>, FlowField<T>)> {
    let cf = ClosedForm::EulerNs { nu, a, b };
    let prof = cf.profile()?;
    let two = T::lit(2.0);
    let mut field = FlowField {
        theta: theta.to_vec(),
        u_r: Vec::with_capacity(theta.len()),
        u_theta: Vec::with_capacity(theta.len()),
        u_phi: vec![T::zero(); theta.len()],
        p: Vec::with_capacity(theta.len()),
        p_const: T::zero(),
    };
    for &th in theta {
        let (s, c) = th.sin_cos();
        if s <= T::zero() {
            return Err(Error::GridTouchesAxis);
        }
        field.u_r.push(a);
        field.u_theta.push((a * c + b) / s);
        field
            .p
            .push(-(a * a + b * b + two * a * b * c) / (two * s * s));
    }
    // p = nu u_r - u_theta^2 / 2 + const
    field.p_const = -nu * a - a * a / two;
    Ok((prof, field))
}

/// The two Euler branches `V = +-sqrt(2 P_c)` as fields at `r = 1`, and the
/// shared pressure `q = -(P_c'' + 2 P_c / sin^2(theta)) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerFields<T> {
    pub v_plus: FlowField<T>,
    pub v_minus: FlowField<T>,
    pub q: Vec<T>,
}

/// `V_+(y) = sqrt(2 P_c(y))`.
pub fn euler_v_plus<T: Real>(c: &FlowParams<T>, y: T) -> Result<T> {
    let p = c.p_c(y);
    if p < T::zero() {
        return domain(format!("P_c({y}) = {p} < 0"));
    }
    Ok((T::lit(2.0) * p).sqrt())
}

pub fn euler_fields<T: Real>(c: &FlowParams<T>, theta: &[T]) -> Result<EulerFields<T>> {
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let n = theta.len();
    let mut vp = FlowField {
        theta: theta.to_vec(),
        u_r: Vec::with_capacity(n),
        u_theta: Vec::with_capacity(n),
        u_phi: vec![T::zero(); n],
        p: Vec::with_capacity(n),
        p_const: T::zero(),
    };
    let mut vm = vp.clone();
    let mut q = Vec::with_capacity(n);
    for &th in theta {
        let (s, y) = th.sin_cos();
        if s <= T::zero() {
            return Err(Error::GridTouchesAxis);
        }
        let p = c.p_c(y);
        if p < T::zero() {
            return domain(format!("P_c(cos {th}) = {p} < 0"));
        }
        let v = (two * p).sqrt();
        // at a zero of P_c the radial component is set to zero
        let vr = if v > T::zero() {
            c.p_c_prime(y) / v
        } else {
            T::zero()
        };
        let qq = -half * (c.p_c_second() + two * p / (s * s));
        vp.u_r.push(vr);
        vp.u_theta.push(v / s);
        vp.p.push(qq);
        vm.u_r.push(-vr);
        vm.u_theta.push(-v / s);
        vm.p.push(qq);
        q.push(qq);
    }
    Ok(EulerFields {
        v_plus: vp,
        v_minus: vm,
        q,
    })
}

fn check_tail_density<T: Real>(prof: &Profile<T>) -> Result<()> {
    // at least three samples per halving of the distance to a pole
    let max_ratio = T::lit(2f64.powf(1.0 / 3.0)) * (T::one() + T::lit(1e-9));
    for end in [Endpoint::Minus1, Endpoint::Plus1] {
        let tail = prof.tail(end, T::lit(0.05));
        for w in tail.windows(2) {
            if w[1].0 / w[0].0 > max_ratio {
                return Err(Error::GridTooCoarse(format!(
                    "tail spacing ratio {} near {:?}",
                    w[1].0 / w[0].0,
                    end
                )));
            }
        }
    }
    Ok(())
}

/// Velocity and pressure from a profile: `u_r = U'(y)` by five-point
/// differences, `u_theta = U / sin(theta)`, `p = nu u_r - u_theta^2 / 2`.
/// The output is ordered by increasing `theta`.
pub fn recover_field<T: Real>(prof: &Profile<T>) -> Result<FlowField<T>> {
    if prof.len() < 5 {
        return Err(Error::GridTooCoarse(format!("{} samples", prof.len())));
    }
    check_tail_density(prof)?;
    let du = derivative(&prof.y, &prof.u);
    let nu = prof.params.nu;
    let half = T::lit(0.5);
    let n = prof.len();
    let mut f = FlowField {
        theta: Vec::with_capacity(n),
        u_r: Vec::with_capacity(n),
        u_theta: Vec::with_capacity(n),
        u_phi: vec![T::zero(); n],
        p: Vec::with_capacity(n),
        p_const: T::zero(),
    };
    for i in (0..n).rev() {
        let y = prof.y[i];
        let s = ((T::one() - y) * (T::one() + y)).sqrt();
        let ut = prof.u[i] / s;
        f.theta.push(y.acos());
        f.u_r.push(du[i]);
        f.u_theta.push(ut);
        f.p.push(nu * du[i] - half * ut * ut);
    }
    Ok(f)
}
