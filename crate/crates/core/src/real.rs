//! Floating-point scalar abstraction for the numeric parts of the pipeline.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the pipeline math runs on.
///
/// Implemented for `f32` and `f64`; `f64` is the default type parameter
/// everywhere a scalar appears in a public type.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + std::iter::Sum + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts a finite `f64` constant into `T`.
pub(crate) fn rconst<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("finite constant must convert")
}

/// Rounds half away from zero and clamps into the 8-bit intensity range.
pub(crate) fn quantize_u8<T: Real>(v: T) -> u8 {
    let r = v.round();
    if r <= T::zero() {
        0
    } else if r >= rconst::<T>(255.0) {
        255
    } else {
        r.to_u8().expect("rounded value in range")
    }
}
