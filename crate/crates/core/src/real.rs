//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal. Exact for `f64`, rounded for `f32`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }

    /// Tolerance used to validate total mass and partition sizes.
    ///
    /// `1e-12` for `f64`; widened to a few thousand ulps for narrower types.
    #[inline]
    fn mass_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(1e3))
    }

    /// Tolerance used when snapping angles at the `0 / 2π` seam.
    #[inline]
    fn seam_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(16.0))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces an angle to `[0, 2π)`, snapping values within the seam tolerance of
/// `2π` to `0`.
#[inline]
pub fn wrap_angle<T: Real>(x: T) -> T {
    let tau = T::two_pi();
    let mut r = x % tau;
    if r < T::zero() {
        r += tau;
    }
    if r >= tau - T::seam_tol() || r.abs() <= T::seam_tol() {
        r = T::zero();
    }
    r
}

/// Intrinsic (arc length) distance between two angles on the unit circle.
#[inline]
pub fn circle_distance<T: Real>(s: T, t: T) -> T {
    let tau = T::two_pi();
    let mut d = (s - t).abs() % tau;
    if d > T::PI() {
        d = tau - d;
    }
    d
}
