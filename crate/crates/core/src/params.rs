//! Parameter geometry of the solution families.
//!
//! [`FlowParams`] carries the viscosity `nu` and the coefficients of
//! `P_c(y) = c1 (1 - y) + c2 (1 + y) + c3 (1 - y^2)`. From these come the
//! critical value [`bar_c3`], membership in the admissible set `J_nu`
//! ([`FlowParams::in_j`]), the endpoint constants ([`TauSet`]), the map to
//! hypergeometric parameters ([`HypMap`]) and the six-way case split
//! ([`CaseLabel`]).

use crate::error::domain;
use crate::specfun::HypPair;
use crate::{Real, Result};

/// One of the two poles of the sphere, as an endpoint of `y in (-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    /// `y = -1`, the south pole `theta = pi`.
    Minus1,
    /// `y = 1`, the north pole `theta = 0`.
    Plus1,
}

impl Endpoint {
    pub fn y<T: Real>(self) -> T {
        match self {
            Endpoint::Minus1 => -T::one(),
            Endpoint::Plus1 => T::one(),
        }
    }

    /// Point at distance `t` inside the interval.
    pub fn inner<T: Real>(self, t: T) -> T {
        match self {
            Endpoint::Minus1 => t - T::one(),
            Endpoint::Plus1 => T::one() - t,
        }
    }

    /// Exact distance `1 + y` or `1 - y` from this endpoint.
    pub fn dist<T: Real>(self, y: T) -> T {
        match self {
            Endpoint::Minus1 => T::one() + y,
            Endpoint::Plus1 => T::one() - y,
        }
    }
}

/// Viscosity and right-hand-side coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams<T> {
    pub nu: T,
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

/// The endpoint constants: `U(-1)` is `tau1` or `tau2`, `U(1)` is `tau1p`
/// or `tau2p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSet<T> {
    pub tau1: T,
    pub tau2: T,
    pub tau1p: T,
    pub tau2p: T,
}

impl<T: Real> TauSet<T> {
    pub fn at(&self, end: Endpoint) -> (T, T) {
        match end {
            Endpoint::Minus1 => (self.tau1, self.tau2),
            Endpoint::Plus1 => (self.tau1p, self.tau2p),
        }
    }

    pub fn max_abs(&self) -> T {
        self.tau1
            .abs()
            .max(self.tau2.abs())
            .max(self.tau1p.abs())
            .max(self.tau2p.abs())
    }
}

/// Parameters of the hypergeometric representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypMap<T> {
    pub a: T,
    pub b: T,
    pub lambda: T,
    /// The roots `A, B`.
    pub ab: HypPair<T>,
    /// `C = a / nu`.
    pub c: T,
}

/// The six mutually exclusive parameter cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// `c1, c2 > -nu^2`, `c3 > bar_c3`.
    Case1,
    /// `c1 = -nu^2 < c2`, `c3 > bar_c3`.
    Case2,
    /// `c2 = -nu^2 < c1`, `c3 > bar_c3`.
    Case3,
    /// `c1 = c2 = -nu^2`, `c3 > bar_c3`.
    Case4,
    /// `c3 = bar_c3`.
    Case5,
    /// Outside `J_nu`.
    Case6,
}

impl CaseLabel {
    pub fn number(self) -> u8 {
        match self {
            CaseLabel::Case1 => 1,
            CaseLabel::Case2 => 2,
            CaseLabel::Case3 => 3,
            CaseLabel::Case4 => 4,
            CaseLabel::Case5 => 5,
            CaseLabel::Case6 => 6,
        }
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Case{}", self.number())
    }
}

/// `-(s1 + s2)(s1 + s2 + 2 nu) / 2` with `s_i = sqrt(nu^2 + c_i)`.
pub fn bar_c3<T: Real>(c1: T, c2: T, nu: T) -> Result<T> {
    let n2 = nu * nu;
    if c1 < -n2 || c2 < -n2 {
        return domain(format!("bar_c3 needs c1, c2 >= -nu^2 (got {c1}, {c2})"));
    }
    let s = (n2 + c1).sqrt() + (n2 + c2).sqrt();
    Ok(-T::lit(0.5) * s * (s + nu + nu))
}

impl<T: Real> FlowParams<T> {
    pub fn new(nu: T, c1: T, c2: T, c3: T) -> Result<Self> {
        if !(nu > T::zero()) || !nu.is_finite() {
            return domain(format!("viscosity must be positive (got {nu})"));
        }
        if !(c1.is_finite() && c2.is_finite() && c3.is_finite()) {
            return domain("coefficients must be finite");
        }
        Ok(Self { nu, c1, c2, c3 })
    }

    pub fn with_c3(&self, c3: T) -> Self {
        Self { c3, ..*self }
    }

    /// `P_c(y)`.
    pub fn p_c(&self, y: T) -> T {
        let one = T::one();
        self.c1 * (one - y) + self.c2 * (one + y) + self.c3 * (one - y * y)
    }

    /// `P_c` at distance `t` from an endpoint, without cancellation in `t`.
    pub fn p_c_near(&self, end: Endpoint, t: T) -> T {
        let two = T::lit(2.0);
        let (near, far) = match end {
            Endpoint::Minus1 => (self.c1, self.c2),
            Endpoint::Plus1 => (self.c2, self.c1),
        };
        near * (two - t) + far * t + self.c3 * t * (two - t)
    }

    /// `P_c'(y)`.
    pub fn p_c_prime(&self, y: T) -> T {
        self.c2 - self.c1 - T::lit(2.0) * self.c3 * y
    }

    /// `P_c''(y)`.
    pub fn p_c_second(&self) -> T {
        -T::lit(2.0) * self.c3
    }

    /// Coefficients `[k0, k1, k2]` with `P_c(y) = k0 + k1 y + k2 y^2`.
    pub fn poly_coeffs(&self) -> [T; 3] {
        [self.c1 + self.c2 + self.c3, self.c2 - self.c1, -self.c3]
    }

    /// Residual of the Riccati equation at `y` for a value `u` and slope `du`.
    pub fn residual(&self, y: T, u: T, du: T) -> T {
        let nu = self.nu;
        nu * (T::one() - y * y) * du + T::lit(2.0) * nu * y * u + T::lit(0.5) * u * u - self.p_c(y)
    }

    fn roots_ok(&self) -> bool {
        let n2 = self.nu * self.nu;
        self.c1 >= -n2 && self.c2 >= -n2
    }

    pub fn s1(&self) -> T {
        (self.nu * self.nu + self.c1).sqrt()
    }

    pub fn s2(&self) -> T {
        (self.nu * self.nu + self.c2).sqrt()
    }

    pub fn bar_c3(&self) -> Result<T> {
        bar_c3(self.c1, self.c2, self.nu)
    }

    /// Membership in `J_nu`. Comparisons are exact on the input values.
    pub fn in_j(&self) -> bool {
        match self.bar_c3() {
            Ok(b) => self.c3 >= b,
            Err(_) => false,
        }
    }

    pub fn classify_case(&self) -> CaseLabel {
        let n2 = self.nu * self.nu;
        let bar = match self.bar_c3() {
            Ok(b) => b,
            Err(_) => return CaseLabel::Case6,
        };
        if self.c3 < bar {
            return CaseLabel::Case6;
        }
        if self.c3 == bar {
            return CaseLabel::Case5;
        }
        match (self.c1 == -n2, self.c2 == -n2) {
            (false, false) => CaseLabel::Case1,
            (true, false) => CaseLabel::Case2,
            (false, true) => CaseLabel::Case3,
            (true, true) => CaseLabel::Case4,
        }
    }

    pub fn tau_values(&self) -> Result<TauSet<T>> {
        if !self.roots_ok() {
            return domain("endpoint values need c1, c2 >= -nu^2");
        }
        let two = T::lit(2.0);
        let nu = self.nu;
        let (s1, s2) = (self.s1(), self.s2());
        Ok(TauSet {
            tau1: two * nu - two * s1,
            tau2: two * nu + two * s1,
            tau1p: -two * nu - two * s2,
            tau2p: -two * nu + two * s2,
        })
    }

    pub fn hyp_map(&self) -> Result<HypMap<T>> {
        if !self.roots_ok() {
            return domain("hypergeometric map needs c1, c2 >= -nu^2");
        }
        let nu = self.nu;
        let a = nu - self.s1();
        let b = self.s2() - nu;
        let lambda = (self.c1 + self.c2) * T::lit(0.5) + self.c3 - a * b;
        // A + B = (a - b - nu) / nu, A B = lambda / (2 nu^2)
        let sum = (a - b - nu) / nu;
        let prod = lambda / (T::lit(2.0) * nu * nu);
        Ok(HypMap {
            a,
            b,
            lambda,
            ab: HypPair::from_sum_product(sum, prod),
            c: a / nu,
        })
    }
}
