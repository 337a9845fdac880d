//! Scalar abstraction for the whole crate.
//!
//! All quantities are plain floating-point scalars in SI units, so the math
//! is written once over a [`Real`] and instantiated at `f32` or `f64`.

use std::fmt;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static {}

/// Lifts an `f64` constant into the working scalar type.
#[inline]
pub(crate) fn scalar<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 constant representable in scalar type")
}

/// Lowers a scalar to `f64` for display and error reporting.
#[inline]
pub(crate) fn to_f64<R: Real>(x: R) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
