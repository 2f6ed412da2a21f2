use num_complex::Complex;

use super::gamma::{gamma_complex, rgamma_complex};
use crate::{Error, Real, Result};

/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Consecutive sub-threshold terms required before the series stops.
const SMALL_RUN: usize = 3;

/// Distance from an integer below which `C - A - B` is treated as integral.
const LOG_CASE_GAP: f64 = 1e-6;

/// The pair `(A, B)` of upper parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HypPair<T> {
    Real(T, T),
    /// `A = re + i im`, `B = re - i im`.
    Conjugate {
        re: T,
        im: T,
    },
}

impl<T: Real> HypPair<T> {
    pub fn as_complex(&self) -> (Complex<T>, Complex<T>) {
        match *self {
            HypPair::Real(a, b) => (Complex::new(a, T::zero()), Complex::new(b, T::zero())),
            HypPair::Conjugate { re, im } => (Complex::new(re, im), Complex::new(re, -im)),
        }
    }

    /// `A + B`, always real.
    pub fn sum(&self) -> T {
        match *self {
            HypPair::Real(a, b) => a + b,
            HypPair::Conjugate { re, .. } => re + re,
        }
    }

    /// `A * B`, always real.
    pub fn product(&self) -> T {
        match *self {
            HypPair::Real(a, b) => a * b,
            HypPair::Conjugate { re, im } => re * re + im * im,
        }
    }

    /// Roots of `x^2 - s x + p = 0`, real or conjugate.
    pub fn from_sum_product(s: T, p: T) -> Self {
        let half = T::lit(0.5);
        let disc = s * s * T::lit(0.25) - p;
        if disc >= T::zero() {
            let r = disc.sqrt();
            HypPair::Real(s * half + r, s * half - r)
        } else {
            HypPair::Conjugate {
                re: s * half,
                im: (-disc).sqrt(),
            }
        }
    }
}

/// Parameters `(A, B; C)` of a Gauss series with real `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams<T> {
    pub ab: HypPair<T>,
    pub c: T,
}

fn is_nonpositive_integer<T: Real>(c: T) -> bool {
    c <= T::zero() && c == c.round()
}

fn cutoff<T: Real>() -> T {
    let e = T::epsilon() * T::lit(0.5);
    let floor = T::lit(1e-16);
    if e > floor {
        e
    } else {
        floor
    }
}

/// Direct summation of the Gauss series. Converges for `|z| < 1`.
pub fn hyp2f1_series<T: Real>(a: Complex<T>, b: Complex<T>, c: T, z: T) -> Result<Complex<T>> {
    if is_nonpositive_integer(c) {
        return Err(Error::DegenerateC);
    }
    let one = Complex::new(T::one(), T::zero());
    let mut sum = one;
    let mut term = one;
    let mut small = 0;
    let tol = cutoff::<T>();
    for n in 0..MAX_SERIES_TERMS {
        let nf = T::from_usize_lossy(n);
        term = term * (a + nf) * (b + nf) / ((c + nf) * (nf + T::one())) * z;
        sum = sum + term;
        if term.norm() == T::zero() {
            return Ok(sum);
        }
        if term.norm() < tol * sum.norm() {
            small += 1;
            if small >= SMALL_RUN {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(format!(
        "2F1 series at z = {z} exceeded {MAX_SERIES_TERMS} terms"
    )))
}

/// `2F1(a, b; c; z)` given both `z` and `1 - z`, so callers near `z = 1`
/// can pass an accurately computed complement.
pub(crate) fn hyp2f1_split<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: T,
    z: T,
    one_minus_z: T,
) -> Result<Complex<T>> {
    if is_nonpositive_integer(c) {
        return Err(Error::DegenerateC);
    }
    if z < T::zero() || one_minus_z <= T::zero() {
        return Err(Error::Domain(format!(
            "2F1 argument z = {z} outside [0, 1)"
        )));
    }
    if z <= T::lit(0.5) {
        return hyp2f1_series(a, b, c, z);
    }
    // C - A - B is real whenever A, B are real or conjugate.
    let d = c - (a + b).re;
    if (d - d.round()).abs() < T::lit(LOG_CASE_GAP) {
        return hyp2f1_series(a, b, c, z);
    }
    hyp2f1_connection(a, b, c, one_minus_z)
}

/// The `z -> 1 - z` connection formula, evaluated at `w = 1 - z`:
///
/// ```text
/// F(a,b;c;z) = G(c)G(d)/(G(c-a)G(c-b)) F(a,b;1-d;w)
///            + w^d G(c)G(-d)/(G(a)G(b)) F(c-a,c-b;1+d;w),   d = c-a-b
/// ```
fn hyp2f1_connection<T: Real>(a: Complex<T>, b: Complex<T>, c: T, w: T) -> Result<Complex<T>> {
    let d = c - (a + b).re;
    let cc = Complex::new(c, T::zero());
    let dc = Complex::new(d, T::zero());
    let f1 = hyp2f1_series(a, b, T::one() - d, w)?;
    let f2 = hyp2f1_series(cc - a, cc - b, T::one() + d, w)?;
    let g_c = gamma_complex(cc);
    let k1 = g_c * gamma_complex(dc) * rgamma_complex(cc - a) * rgamma_complex(cc - b);
    let k2 = g_c * gamma_complex(-dc) * rgamma_complex(a) * rgamma_complex(b);
    Ok(k1 * f1 + k2 * f2 * w.powf(d))
}

/// `2F1(a, b; c; z)` for complex `a, b`, real `c`, and `z` in `[0, 1)`.
pub fn hyp2f1_complex<T: Real>(a: Complex<T>, b: Complex<T>, c: T, z: T) -> Result<Complex<T>> {
    if z >= T::one() || z < T::zero() {
        return Err(Error::Domain(format!(
            "2F1 argument z = {z} outside [0, 1)"
        )));
    }
    hyp2f1_split(a, b, c, z, T::one() - z)
}

/// `2F1(a, b; c; z)` for real parameters.
pub fn hyp2f1<T: Real>(a: T, b: T, c: T, z: T) -> Result<T> {
    let s = hyp2f1_complex(Complex::new(a, T::zero()), Complex::new(b, T::zero()), c, z)?;
    Ok(s.re)
}

/// Evaluates the series for a real or conjugate parameter pair. The
/// imaginary part of the complex sum is rounding noise and is dropped.
pub fn hyp2f1_params<T: Real>(p: &HypParams<T>, z: T) -> Result<T> {
    let (a, b) = p.ab.as_complex();
    Ok(hyp2f1_complex(a, b, p.c, z)?.re)
}

/// `d/dz 2F1(a, b; c; z) = (a b / c) 2F1(a + 1, b + 1; c + 1; z)`.
pub fn hyp2f1_deriv<T: Real>(a: Complex<T>, b: Complex<T>, c: T, z: T) -> Result<Complex<T>> {
    if c == T::zero() {
        return Err(Error::DegenerateC);
    }
    let f = hyp2f1_complex(a + T::one(), b + T::one(), c + T::one(), z)?;
    Ok(f * a * b / c)
}
