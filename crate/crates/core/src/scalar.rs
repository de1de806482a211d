use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating scalar the numeric kernel is generic over.
///
/// Everything numerical in this crate (tensors, the recurrent cells, the
/// gradient tape, the models) is written against this trait; `f64` is the
/// default instantiation used by the training pipeline and the CLI, `f32`
/// is available through the same code paths.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Convert an `f64` constant into this scalar type.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
