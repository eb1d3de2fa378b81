//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point element type (`f32` or `f64`).
///
/// Everything numeric in this crate is written against this trait so the same
/// code path serves single and double precision. Tolerances that are fixed
/// constants for `f64` are converted with [`Scalar::lit`]; routines that need
/// to stay meaningful in `f32` widen them with [`Scalar::epsilon`].
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Converts a count into this scalar type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Returns `max(tol, k * eps)`: a fixed tolerance that never drops below
    /// `k` units of machine precision for the scalar type in use.
    #[inline]
    fn tol(tol: f64, k: f64) -> Self {
        Self::lit(tol).max(Self::epsilon() * Self::lit(k))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
