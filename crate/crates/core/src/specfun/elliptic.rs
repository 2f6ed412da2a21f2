use crate::{Error, Real, Result};

const AGM_MAX_ITER: usize = 64;

/// Gauss-Legendre nodes and weights on [-1, 1], 16 points.
const GL16: [(f64, f64); 8] = [
    (0.095_012_509_837_637_44, 0.189_450_610_455_068_5),
    (0.281_603_550_779_258_9, 0.182_603_415_044_923_6),
    (0.458_016_777_657_227_4, 0.169_156_519_395_002_5),
    (0.617_876_244_402_643_7, 0.149_595_988_816_576_7),
    (0.755_404_408_355_003, 0.124_628_971_255_533_9),
    (0.865_631_202_387_831_7, 0.095_158_511_682_492_78),
    (0.944_575_023_073_232_6, 0.062_253_523_938_647_89),
    (0.989_400_934_991_649_9, 0.027_152_459_411_754_09),
];

/// Composite 16-point Gauss-Legendre rule on `[0, pi/2]`.
fn quad_half_pi<T: Real>(f: impl Fn(T) -> T) -> T {
    let panels = 64;
    let h = T::FRAC_PI_2() / T::from_usize_lossy(panels);
    let half = T::lit(0.5);
    let mut acc = T::zero();
    for k in 0..panels {
        let mid = h * (T::from_usize_lossy(k) + half);
        for &(x, w) in GL16.iter() {
            let dx = h * half * T::lit(x);
            acc = acc + T::lit(w) * (f(mid - dx) + f(mid + dx));
        }
    }
    acc * h * half
}

/// AGM sequence for parameter `m`; returns `(a_inf, sum_n 2^(n-1) c_n^2)`.
fn agm<T: Real>(m: T) -> Option<(T, T)> {
    let half = T::lit(0.5);
    let mut a = T::one();
    let mut b = (T::one() - m).sqrt();
    let mut pow = half;
    let mut sum = pow * m;
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= T::epsilon() * a {
            return Some((a, sum));
        }
        let c = (a - b) * half;
        let an = (a + b) * half;
        b = (a * b).sqrt();
        a = an;
        pow = pow + pow;
        sum = sum + pow * c * c;
    }
    None
}

/// Complete elliptic integral of the first kind,
/// `K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t)`, for `0 <= m < 1`.
pub fn ellip_k<T: Real>(m: T) -> Result<T> {
    if !(m >= T::zero() && m < T::one()) {
        return Err(Error::Domain(format!(
            "ellip_k parameter {m} outside [0, 1)"
        )));
    }
    match agm(m) {
        Some((a, _)) => Ok(T::FRAC_PI_2() / a),
        None => Ok(quad_half_pi(|t: T| {
            let s = t.sin();
            T::one() / (T::one() - m * s * s).sqrt()
        })),
    }
}

/// Complete elliptic integral of the second kind,
/// `E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt`, for `0 <= m <= 1`.
pub fn ellip_e<T: Real>(m: T) -> Result<T> {
    if !(m >= T::zero() && m <= T::one()) {
        return Err(Error::Domain(format!(
            "ellip_e parameter {m} outside [0, 1]"
        )));
    }
    if m == T::one() {
        return Ok(T::one());
    }
    match agm(m) {
        Some((a, sum)) => Ok(T::FRAC_PI_2() / a * (T::one() - sum)),
        None => Ok(quad_half_pi(|t: T| {
            let s = t.sin();
            (T::one() - m * s * s).sqrt()
        })),
    }
}

/// Associate integral `B(m) = int_0^{pi/2} cos^2 t / sqrt(1 - m sin^2 t) dt
/// = (E(m) - (1 - m) K(m)) / m`, for `0 <= m < 1`. Evaluated without the
/// cancellation of the difference form as `m -> 0`.
pub fn ellip_b<T: Real>(m: T) -> Result<T> {
    if !(m >= T::zero() && m < T::one()) {
        return Err(Error::Domain(format!(
            "ellip_b parameter {m} outside [0, 1)"
        )));
    }
    if m >= T::lit(0.25) {
        return Ok((ellip_e(m)? - (T::one() - m) * ellip_k(m)?) / m);
    }
    // pi/4 * 2F1(1/2, 1/2; 2; m)
    let half = T::lit(0.5);
    let mut term = T::one();
    let mut sum = T::one();
    for n in 0..200 {
        let nf = T::from_usize_lossy(n);
        term = term * (nf + half) * (nf + half) / ((nf + T::lit(2.0)) * (nf + T::one())) * m;
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum {
            break;
        }
    }
    Ok(T::FRAC_PI_4() * sum)
}
