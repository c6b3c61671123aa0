//! Scalar abstraction shared by the grid, solver and diagnostics.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Floating point type usable by every numerical routine in the crate: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + FftNum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion of an index or count.
    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index representable")
    }

    fn to_f64_lossy(self) -> f64;
}

impl Real for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Japanese bracket ⟨a⟩ = √(1 + a²).
pub fn bracket<T: Real>(a: T) -> T {
    (T::one() + a * a).sqrt()
}
