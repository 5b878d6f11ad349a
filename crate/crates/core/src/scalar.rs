//! Numeric scalar abstraction shared by the scoring and geometry code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real number type usable for keyword scores and coordinates.
///
/// Implemented for `f32` and `f64`. The graph itself stores coordinates as
/// JSON numbers (`f64`); generic code converts at the boundary.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both are zero.
pub fn relative_error<S: Scalar>(a: S, b: S) -> S {
    let scale = a.abs().max(b.abs());
    if scale == S::zero() {
        S::zero()
    } else {
        (a - b).abs() / scale
    }
}
