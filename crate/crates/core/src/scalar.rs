//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustdct::DctNum;
use serde::Serialize;

/// Real floating-point scalar the solvers are generic over.
///
/// The tolerance hooks scale with the precision of the type so that the
/// same checks are meaningful for `f32` and `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + DctNum
    + Sum
    + Debug
    + Display
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance for "this should be exactly zero up to rounding".
    fn zero_tol() -> Self;

    /// Relative tolerance for polynomial division remainders.
    fn division_tol() -> Self;

    /// Converts an `f64` literal or computed constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 value representable")
    }

    /// Converts a count or index.
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize value representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn zero_tol() -> Self {
        1e-12
    }

    fn division_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn zero_tol() -> Self {
        1e-5
    }

    fn division_tol() -> Self {
        1e-3
    }
}
