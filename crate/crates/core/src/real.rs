//! Scalar abstraction for the floating-point core.

use core::fmt::Debug;
use core::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the pmf, fitting, selection, and sampling math is
/// generic over. Blanket-implemented for `f32` and `f64`; the aliases at the
/// crate root pin the concrete `f64` surface.
pub trait Real: Float + FromPrimitive + Sum<Self> + Debug + 'static {
    /// Lossy conversion from an `f64` constant.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 constant")
    }

    #[inline]
    fn of_u32(x: u32) -> Self {
        <Self as FromPrimitive>::from_u32(x).expect("u32 constant")
    }

    #[inline]
    fn of_u64(x: u64) -> Self {
        <Self as FromPrimitive>::from_u64(x).expect("u64 constant")
    }

    #[inline]
    fn of_u128(x: u128) -> Self {
        <Self as FromPrimitive>::from_u128(x).expect("u128 constant")
    }

    #[inline]
    fn of_usize(x: usize) -> Self {
        <Self as FromPrimitive>::from_usize(x).expect("usize constant")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Sum<Self> + Debug + 'static {}
