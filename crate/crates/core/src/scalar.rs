use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar used by the generic numerical kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant; exact for `f64`, rounded for `f32`.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable")
    }

    /// Converts a count or index.
    fn n(v: usize) -> Self {
        Self::from_usize(v).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
