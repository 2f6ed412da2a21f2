//! Embedded Runge-Kutta 5(4) pair of Dormand and Prince with adaptive step
//! control, for small fixed-size systems.

use crate::{Error, Real, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Fifth-order weights minus fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-size controller settings.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances<T> {
    pub rel: T,
    pub abs: T,
    /// Smallest admissible step magnitude.
    pub h_min: T,
    pub max_steps: usize,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            rel: T::default_rel_tol(),
            abs: T::default_rel_tol() * T::lit(1e-2),
            h_min: T::lit(1e-300).max(T::min_positive_value()),
            max_steps: 200_000,
        }
    }
}

fn axpy<T: Real, const N: usize>(y: &[T; N], terms: &[(f64, &[T; N])], h: T) -> [T; N] {
    let mut out = *y;
    for (w, k) in terms {
        let w = T::lit(*w) * h;
        for i in 0..N {
            out[i] = out[i] + w * k[i];
        }
    }
    out
}

/// One Dormand-Prince step. Returns the fifth-order solution and the
/// embedded error estimate.
pub fn dopri_step<T, F, const N: usize>(f: &F, x: T, y: &[T; N], h: T) -> ([T; N], [T; N])
where
    T: Real,
    F: Fn(T, &[T; N]) -> [T; N],
{
    let k1 = f(x, y);
    let k2 = f(x + T::lit(C2) * h, &axpy(y, &[(A21, &k1)], h));
    let k3 = f(x + T::lit(C3) * h, &axpy(y, &[(A31, &k1), (A32, &k2)], h));
    let k4 = f(
        x + T::lit(C4) * h,
        &axpy(y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h),
    );
    let k5 = f(
        x + T::lit(C5) * h,
        &axpy(y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
    );
    let k6 = f(
        x + h,
        &axpy(
            y,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            h,
        ),
    );
    let y5 = axpy(
        y,
        &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        h,
    );
    let k7 = f(x + h, &y5);
    let zero = [T::zero(); N];
    let err = axpy(
        &zero,
        &[
            (E1, &k1),
            (E3, &k3),
            (E4, &k4),
            (E5, &k5),
            (E6, &k6),
            (E7, &k7),
        ],
        h,
    );
    (y5, err)
}

fn error_norm<T: Real, const N: usize>(
    y: &[T; N],
    y_new: &[T; N],
    err: &[T; N],
    tol: &Tolerances<T>,
) -> T {
    let mut worst = T::zero();
    for i in 0..N {
        if !y_new[i].is_finite() || !err[i].is_finite() {
            return T::infinity();
        }
        let scale = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
        worst = worst.max(err[i].abs() / scale);
    }
    worst
}

/// Outcome of one accepted adaptive step.
#[derive(Debug, Clone, Copy)]
pub struct Accepted<T, const N: usize> {
    pub x: T,
    pub y: [T; N],
    /// Step actually taken.
    pub h: T,
    /// Suggested next step.
    pub h_next: T,
}

/// Takes one accepted step of at most `h` (signed). Rejected trials shrink
/// the step until the error estimate passes or `h_min` is reached.
pub fn adaptive_step<T, F, const N: usize>(
    f: &F,
    x: T,
    y: &[T; N],
    mut h: T,
    tol: &Tolerances<T>,
) -> Result<Accepted<T, N>>
where
    T: Real,
    F: Fn(T, &[T; N]) -> [T; N],
{
    let safety = T::lit(0.9);
    let grow = T::lit(5.0);
    let shrink = T::lit(0.2);
    let expo = T::lit(-0.2);
    loop {
        if h.abs() < tol.h_min {
            return Err(Error::ToleranceFailure(x.to_f64_lossy()));
        }
        let (y_new, err) = dopri_step(f, x, y, h);
        let e = error_norm(y, &y_new, &err, tol);
        if e <= T::one() {
            let fac = if e == T::zero() {
                grow
            } else {
                (safety * e.powf(expo)).min(grow).max(shrink)
            };
            return Ok(Accepted {
                x: x + h,
                y: y_new,
                h,
                h_next: h * fac,
            });
        }
        let fac = if e.is_finite() {
            (safety * e.powf(expo)).max(shrink)
        } else {
            shrink
        };
        h = h * fac;
    }
}

/// Integrates from `x0` to `x1` exactly, carrying the step-size guess in
/// `h` between calls.
pub fn integrate_to<T, F, const N: usize>(
    f: &F,
    x0: T,
    y0: [T; N],
    x1: T,
    h: &mut T,
    tol: &Tolerances<T>,
) -> Result<[T; N]>
where
    T: Real,
    F: Fn(T, &[T; N]) -> [T; N],
{
    let dir = if x1 >= x0 { T::one() } else { -T::one() };
    let mut x = x0;
    let mut y = y0;
    if *h == T::zero() || (*h * dir) <= T::zero() {
        *h = (x1 - x0) * T::lit(0.1);
    }
    for _ in 0..tol.max_steps {
        let remaining = x1 - x;
        if remaining * dir <= T::zero() {
            return Ok(y);
        }
        let last = h.abs() >= remaining.abs();
        let trial = if last { remaining } else { *h };
        let acc = adaptive_step(f, x, &y, trial, tol)?;
        y = acc.y;
        if last && acc.h == trial {
            x = x1;
        } else {
            x = acc.x;
            *h = acc.h_next;
        }
    }
    Err(Error::ToleranceFailure(x.to_f64_lossy()))
}
