//! Scalar abstraction for the numerical kernels.

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the kernels are generic over. Implemented for `f32`
/// and `f64`; everything downstream of the kernels is instantiated at `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + core::fmt::Debug
    + core::fmt::Display
    + core::fmt::LowerExp
    + core::ops::AddAssign
    + core::ops::MulAssign
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only on non-representable input,
    /// which cannot happen for the compile-time literals it is used with.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Complex<T> = num_complex::Complex<T>;
