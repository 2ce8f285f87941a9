//! Scalar abstraction for the numeric kernels.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the decomposition kernels are generic over.
///
/// Implemented for `f32` and `f64`. The blanket impl picks up any type with
/// the required `num-traits` bounds.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Send + Sync + 'static
{
    /// Converts an `f64` constant; panics only for non-finite input.
    fn cast(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 constant")
    }

    /// Converts a grid index or count.
    fn from_index(index: usize) -> Self {
        Self::from_usize(index).unwrap_or_else(|| Self::cast(index as f64))
    }
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Send + Sync + 'static
{
}

/// Euclidean norm of a small slice.
pub(crate) fn norm2<S: Scalar>(values: &[S]) -> S {
    values
        .iter()
        .fold(S::zero(), |acc, &v| acc + v * v)
        .sqrt()
}

/// Dot product of two equally long slices.
pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Tolerance for accepting a caller-supplied unit vector.
///
/// 1e-9 for `f64`; widens with the scalar's epsilon so normalized `f32`
/// vectors are still accepted.
pub(crate) fn unit_norm_tolerance<S: Scalar>() -> S {
    S::cast(1e-9).max(S::epsilon() * S::cast(128.0))
}
