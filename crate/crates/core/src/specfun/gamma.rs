use num_complex::Complex;

use crate::Real;

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for `Re z >= 0.5`.
fn lanczos<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let z = z - one;
    let mut acc = Complex::new(T::lit(LANCZOS[0]), T::zero());
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + Complex::new(T::lit(p), T::zero()) / (z + T::from_usize_lossy(i));
    }
    let t = z + T::lit(LANCZOS_G + 0.5);
    let sqrt_2pi = (T::lit(2.0) * T::PI()).sqrt();
    t.powc(z + T::lit(0.5)) * (-t).exp() * acc * sqrt_2pi
}

/// Reciprocal gamma, which is entire: it returns exactly zero at the poles
/// `0, -1, -2, ...` of `Gamma`.
pub fn rgamma_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        if z.im == T::zero() && z.re == z.re.round() {
            return Complex::new(T::zero(), T::zero());
        }
        // 1 / Gamma(z) = Gamma(1 - z) sin(pi z) / pi
        let one = Complex::new(T::one(), T::zero());
        lanczos(one - z) * (z * T::PI()).sin() / T::PI()
    } else {
        Complex::new(T::one(), T::zero()) / lanczos(z)
    }
}

/// Gamma function of a complex argument. Poles return an infinite value.
pub fn gamma_complex<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        if z.im == T::zero() && z.re == z.re.round() {
            return Complex::new(T::infinity(), T::zero());
        }
        let one = Complex::new(T::one(), T::zero());
        Complex::new(T::PI(), T::zero()) / ((z * T::PI()).sin() * lanczos(one - z))
    } else {
        lanczos(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn integer_and_half_integer_values() {
        assert!((gamma_complex(c(5.0, 0.0)).re - 24.0).abs() < 1e-12);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma_complex(c(0.5, 0.0)).re - sqrt_pi).abs() < 1e-14);
        assert!((gamma_complex(c(-0.5, 0.0)).re + 2.0 * sqrt_pi).abs() < 1e-13);
    }

    #[test]
    fn reciprocal_vanishes_at_poles() {
        for k in 0..5 {
            assert_eq!(rgamma_complex(c(-(k as f64), 0.0)).norm(), 0.0);
        }
    }

    #[test]
    fn recurrence_off_axis() {
        // Gamma(z + 1) = z Gamma(z)
        for &(re, im) in &[(0.3, 1.7), (-1.4, 0.6), (2.5, -3.0)] {
            let z = c(re, im);
            let lhs = gamma_complex(z + 1.0);
            let rhs = z * gamma_complex(z);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = c(0.7, 2.2);
        let a = gamma_complex(z);
        let b = gamma_complex(z.conj());
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
    }
}
