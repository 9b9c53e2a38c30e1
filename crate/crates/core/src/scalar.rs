//! Scalar abstraction shared by the analytic engines.

use nalgebra::RealField;
use num_traits::{FloatConst, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar the quantum, detection and repeater math is written against.
///
/// Implemented for `f32` and `f64`. The tolerances quoted throughout the crate
/// (1e-12 and friends) are `f64` figures; [`tolerance`] widens them to a few
/// ulps when the scalar cannot resolve them.
pub trait Real:
    RealField + FloatConst + ToPrimitive + Copy + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lifts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Lowers `T` to `f64` for reporting and sampling.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `base` for `f64`, but never tighter than 64 ulps of `T`.
pub fn tolerance<T: Real>(base: f64) -> T {
    let floor = T::default_epsilon() * lit::<T>(64.0);
    let b = lit::<T>(base);
    if b > floor {
        b
    } else {
        floor
    }
}

pub(crate) fn clamp<T: Real>(x: T, lo: T, hi: T) -> T {
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}
