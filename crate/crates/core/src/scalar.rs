//! Scalar abstraction over the element type of matrices and tensors.

use std::fmt::{Debug, Display};

use ndarray::LinalgScalar;
use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point element type: `f32` or `f64`.
///
/// All graph matrices, tensors and layers are generic over this trait.
/// Test suites instantiate everything at `f64`; training may run at `f32`.
pub trait Scalar:
    Float + FromPrimitive + NumAssignOps + LinalgScalar + Display + Debug + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, panicking only for values outside the
    /// target range (never for finite inputs of f32/f64).
    fn from_f64(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 not representable in scalar type")
    }

    fn to_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("scalar not representable as f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
