//! Axisymmetric, no-swirl, (-1)-homogeneous solutions of the stationary
//! Navier-Stokes equations in R^3.
//!
//! Writing `y = cos(theta)` and `U(y) = u_theta * sin(theta)`, the problem
//! reduces to the Riccati equation
//!
//! ```text
//! nu (1 - y^2) U' + 2 nu y U + U^2 / 2 = P_c(y)
//! P_c(y) = c1 (1 - y) + c2 (1 + y) + c3 (1 - y^2)
//! ```
//!
//! on `(-1, 1)`. The crate provides the explicit solution families, three
//! numerical representations of the general solution (direct integration,
//! the linearised second-order equation and the hypergeometric form),
//! classification of global and local solutions, Liouville-formula fields
//! on the sphere and vanishing-viscosity sweeps.
//!
//! Everything numeric is generic over [`Real`] (implemented for `f32` and
//! `f64`). The `*64` aliases at the crate root fix the scalar to `f64`,
//! which is what the accuracy targets in the docs refer to.

pub mod classify;
pub mod closedform;
pub mod liouville;
pub mod ode;
pub mod params;
pub mod profile;
pub mod riccati;
pub mod specfun;
pub mod viscosity;

mod error;
mod real;

pub use error::{Error, Result};
pub use real::Real;

pub type FlowParams64 = params::FlowParams<f64>;
pub type TauSet64 = params::TauSet<f64>;
pub type HypMap64 = params::HypMap<f64>;
pub type Profile64 = profile::Profile<f64>;
pub type FlowField64 = profile::FlowField<f64>;
pub type SolveRequest64 = riccati::SolveRequest<f64>;
pub type GammaInterval64 = classify::GammaInterval<f64>;
pub type SingularityType64 = classify::SingularityType<f64>;
pub type SweepReport64 = viscosity::SweepReport<f64>;

pub type FlowParams32 = params::FlowParams<f32>;
pub type Profile32 = profile::Profile<f32>;
pub type SolveRequest32 = riccati::SolveRequest<f32>;
