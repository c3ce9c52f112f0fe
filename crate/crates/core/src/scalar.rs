//! Floating-point scalar abstraction for the evaluation layer.
//!
//! Exact objects (weights, multiplicities, rationals) never go through this
//! trait; everything that evaluates on the torus does, so the same kernels
//! instantiate at `f32` or `f64`.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Scalar type for torus evaluation, quadrature and densities.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + std::fmt::Debug + Send + Sync + 'static
{
    /// Lossy conversion back to `f64` (exact for `f64` itself).
    fn to_f64(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// Shorthand for converting an `f64` constant into the working scalar.
#[inline]
pub fn cast<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 constant representable in scalar type")
}

/// Converts an exact integer (doubled-weight coordinates, counts) into `F`.
#[inline]
pub fn cast_i64<F: Real>(x: i64) -> F {
    F::from_i64(x).expect("i64 representable in scalar type")
}
