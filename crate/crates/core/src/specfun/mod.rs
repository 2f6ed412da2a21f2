//! Special functions: Gauss hypergeometric series and complete elliptic
//! integrals.
//!
//! - [`hyp2f1`] / [`hyp2f1_complex`]: `2F1(A, B; C; z)` for real `C` and
//!   `z` in `[0, 1)`, with `A, B` either both real or a complex-conjugate
//!   pair. The sum is accumulated in complex arithmetic in both cases.
//! - [`ellip_k`] / [`ellip_e`]: complete elliptic integrals in the
//!   parameter convention `K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt`.
//!
//! # Algorithm
//!
//! `2F1` is summed directly for `z <= 0.5`. For `z > 0.5` the `z -> 1 - z`
//! connection formula is used, unless `C - A - B` is within `1e-6` of an
//! integer (the logarithmic case), where the direct series is used up to
//! the term cap. The series stops once three consecutive terms are below
//! `1e-16` of the partial sum, with a hard cap of 10 000 terms.
//!
//! `K` and `E` use the arithmetic-geometric mean. If the AGM fails to
//! settle within its iteration cap, composite Gauss-Legendre quadrature of
//! the defining integral is used instead.

mod elliptic;
mod gamma;
mod hyper;

pub use elliptic::{ellip_b, ellip_e, ellip_k};
pub use gamma::{gamma_complex, rgamma_complex};
pub use hyper::{
    hyp2f1, hyp2f1_complex, hyp2f1_deriv, hyp2f1_params, hyp2f1_series, HypPair, HypParams,
    MAX_SERIES_TERMS,
};
