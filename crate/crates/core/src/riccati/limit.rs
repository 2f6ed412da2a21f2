use super::ivp::mirrored_roots;
use crate::params::Endpoint;
use crate::profile::{aitken, Profile};
use crate::{Error, Real, Result};

/// Distance within which an extrapolated value is identified with a root.
pub const SNAP_TOL: f64 = 1e-3;

/// How an endpoint value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Snap {
    /// The extrapolated value was within [`SNAP_TOL`] of an endpoint root.
    Extrapolated,
    /// Slow (double-root) approach; the root is identified from the
    /// attracting basin the tail lies in.
    Basin,
    /// Returned as measured.
    NoSnap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLimit<T> {
    pub value: T,
    /// Extrapolated value before snapping.
    pub raw: T,
    pub snap: Snap,
}

/// Endpoint value of a profile from its deepest tail samples.
///
/// Aitken's extrapolation is applied to the three samples nearest the pole
/// and the result is snapped to the nearer endpoint root. When that fails
/// but the tail approaches the attracting root monotonically from inside
/// its basin (the double-root case, where convergence is only like
/// `1 / |ln t|`), the attracting root is returned with [`Snap::Basin`].
pub fn boundary_limit<T: Real>(prof: &Profile<T>, end: Endpoint) -> Result<BoundaryLimit<T>> {
    if !prof.domain.reaches(end) {
        return Err(Error::EndpointNotReached);
    }
    let tail = prof.tail(end, T::lit(0.05));
    if tail.len() < 3 {
        return Err(Error::GridTooCoarse("fewer than three tail samples".into()));
    }
    let raw = aitken(tail[2].1, tail[1].1, tail[0].1);
    let roots = prof.params.tau_values().ok().map(|ts| ts.at(end));
    let snap_tol = T::lit(SNAP_TOL);
    if let Some((r1, r2)) = roots {
        let near = if (raw - r1).abs() <= (raw - r2).abs() {
            r1
        } else {
            r2
        };
        if (raw - near).abs() <= snap_tol {
            return Ok(BoundaryLimit {
                value: near,
                raw,
                snap: Snap::Extrapolated,
            });
        }
    }
    if let Some((attr, rep)) = mirrored_roots(&prof.params, end) {
        let k = match end {
            Endpoint::Minus1 => T::one(),
            Endpoint::Plus1 => -T::one(),
        };
        let m: Vec<T> = tail.iter().take(8).map(|s| k * s.1).collect();
        let below = m.iter().all(|&u| u < rep);
        let monotone = m
            .windows(2)
            .all(|w| (w[0] - attr).abs() <= (w[1] - attr).abs());
        if m.len() >= 4 && below && monotone {
            return Ok(BoundaryLimit {
                value: k * attr,
                raw,
                snap: Snap::Basin,
            });
        }
    }
    Ok(BoundaryLimit {
        value: raw,
        raw,
        snap: Snap::NoSnap,
    })
}
