use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Scalar type used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only if the conversion is lossy
    /// beyond representation, which never happens for `f32`/`f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer not representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest distance from an endpoint used by the endpoint tails.
    fn tail_floor() -> Self {
        let e = Self::epsilon() * Self::lit(100.0);
        let floor = Self::lit(1e-14);
        if e > floor {
            e
        } else {
            floor
        }
    }

    /// Default relative tolerance of the ODE integrator.
    fn default_rel_tol() -> Self {
        let e = Self::epsilon() * Self::lit(1e3);
        let t = Self::lit(1e-10);
        if e > t {
            e
        } else {
            t
        }
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}
