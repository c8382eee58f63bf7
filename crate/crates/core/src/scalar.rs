//! Scalar abstraction: the numerical core is generic over the floating-point
//! width. Concrete `f64`/`f32` aliases live at the crate root.

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar the solver is generic over (`f32` or `f64`).
pub trait Scalar: Float + FromPrimitive + Display + Debug + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Display + Debug + Send + Sync + 'static {}

/// Converts an `f64` constant into the working scalar type.
pub(crate) fn cast<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("constant must be representable in the scalar type")
}

/// `max` over an iterator of scalars, starting from `init`.
pub(crate) fn fold_max<T: Scalar>(init: T, iter: impl Iterator<Item = T>) -> T {
    iter.fold(init, |a, b| a.max(b))
}
