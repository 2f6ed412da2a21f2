//! Numerical solution of the Riccati equation in three representations.
//!
//! - [`integrate_ivp`]: direct adaptive integration from `U(ybar) = gamma`.
//! - [`linear_rep`]: the linear equation `2 nu^2 (1 - y^2)^2 w'' = P_c w`
//!   with `U = 2 nu (1 - y^2) w' / w`.
//! - [`hypergeom_rep`]: the Gauss hypergeometric form in `z = (1 + y) / 2`.
//!
//! # Algorithm
//!
//! For `|y| <= 0.95` the equation is integrated in `y`. Closer to a pole it
//! is integrated in `s = ln t`, `t = 1 -+ y`, where the degenerate factor
//! becomes `nu (2 - t)`. In the stretched chart the unknown is the offset
//! `delta = U - tau` from the nearer endpoint root and the right-hand side
//! is expanded so that no terms cancel as `t -> 0`.
//!
//! Whenever `|U|` exceeds the blow-up threshold the integrator switches to
//! `V = 1 / U`, which satisfies a regular equation through the pole of `U`.
//! A sign change of `V` within a step certifies a blow-up; its ordinate is
//! found by bisecting the step length.
//!
//! Reaching an endpoint is decided from the frozen endpoint dynamics
//! `dU/ds ~ -(U - tau1)(U - tau2) / (4 nu)`: a solution below the repelling
//! root at the floor distance converges to the attracting one. Solutions
//! at or above the repelling root are followed to `t ~ 1e-290` and declared
//! blown up only if `V` actually changes sign there.
//!
//! Upper and lower solutions leave a pole along the repelling root and are
//! unstable when integrated toward it. [`anchored_profile`] starts them
//! from the local expansion `U = tau + a t` and integrates away from the
//! pole instead.

mod hyper;
mod ivp;
mod limit;
mod linear;

use crate::params::FlowParams;
use crate::Real;

pub use hyper::hypergeom_rep;
pub use ivp::{anchored_profile, domain_class, integrate_ivp, reaches_endpoint};
pub use limit::{boundary_limit, BoundaryLimit, Snap, SNAP_TOL};
pub use linear::{blowup_solution, blowup_solution_with_slope, linear_rep, BlowupSide, LinearRep};

/// Which way to integrate from `ybar`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Toward `y = 1`.
    Forward,
    /// Toward `y = -1`.
    Backward,
    Both,
}

/// Accuracy and blow-up settings of a solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiTol<T> {
    pub rel: T,
    pub abs: T,
    /// `|U|` above which the reciprocal variable is used.
    pub blowup_threshold: T,
}

impl<T: Real> Default for RiccatiTol<T> {
    fn default() -> Self {
        let rel = T::default_rel_tol();
        Self {
            rel,
            abs: rel * T::lit(1e-2),
            blowup_threshold: T::lit(1e6),
        }
    }
}

/// Initial-value problem `U(ybar) = gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveRequest<T> {
    pub params: FlowParams<T>,
    pub ybar: T,
    pub gamma: T,
    pub direction: Direction,
    pub tol: RiccatiTol<T>,
    /// Output ordinates; the standard grid when `None`. `ybar` is merged in.
    pub grid: Option<Vec<T>>,
}

impl<T: Real> SolveRequest<T> {
    pub fn new(params: FlowParams<T>, ybar: T, gamma: T) -> Self {
        Self {
            params,
            ybar,
            gamma,
            direction: Direction::Both,
            tol: RiccatiTol::default(),
            grid: None,
        }
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_tol(mut self, tol: RiccatiTol<T>) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_grid(mut self, grid: Vec<T>) -> Self {
        self.grid = Some(grid);
        self
    }
}

/// Shape of the maximal interval of existence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    /// Defined on all of `(-1, 1)`.
    Global,
    /// Blows up to `-infinity` at some `y1 < 1` and reaches `-1`.
    A1,
    /// Blows up to `+infinity` at some `y0 > -1` and reaches `1`.
    A2,
    /// Blows up on both sides.
    A3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainClass<T> {
    pub class: ClassKind,
    /// Blow-up ordinates in increasing order.
    pub blowup_points: Vec<T>,
}
