//! Scalar abstraction for the analysis code.
//!
//! Everything that evaluates game formulas is generic over [`Real`], so the
//! same code runs at `f32` and `f64`. The exact-rational verification path
//! does not go through this trait; it lives in [`crate::analysis::exact`].

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, panicking only for values a float type
    /// cannot hold at all (never the case for finite constants used here).
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant converts to Real")
    }

    /// Lossless for every count that occurs in a game (`n <= 2^24` even at f32).
    #[inline]
    fn from_count(k: u32) -> Self {
        Self::of(f64::from(k))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
