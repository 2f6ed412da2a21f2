use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypergeometric parameter C is a non-positive integer or integer-degenerate")]
    DegenerateC,
    #[error("series or transformation failed to converge: {0}")]
    NoConvergence(String),
    #[error("integrator step size underflow at y = {0}")]
    ToleranceFailure(f64),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("profile does not reach the requested endpoint")]
    EndpointNotReached,
    #[error("parameters are outside J_nu")]
    NotInJ,
    #[error("parameters lie on the critical surface c3 = bar_c3")]
    CriticalSurface,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("singular point of the meromorphic function")]
    SingularPoint,
    #[error("coefficients are not Euler admissible: {0}")]
    NotEulerAdmissible(String),
    #[error("no interior leaf with the requested zero crossing")]
    SelectionFailure,
    #[error("grid touches the symmetry axis or the origin")]
    GridTouchesAxis,
    #[error("out of scope: {0}")]
    OutOfScope(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
