//! Numeric abstraction shared by every computation in the crate.
//!
//! All geometry, objective and indicator code is written against [`Scalar`],
//! so the same model can be evaluated in `f32` (compact, fast) or `f64`
//! (the default, used by the experiment harness and every tolerance check).

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar usable as the objective/geometry type.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal or configuration value into this scalar.
    ///
    /// Values outside the representable range saturate to infinity, which
    /// the validation layers reject.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(|| {
            if value.is_sign_negative() {
                Self::neg_infinity()
            } else {
                Self::infinity()
            }
        })
    }

    /// Lossless-as-possible widening used when crossing into `f64`-only code
    /// (serialization, random draws, CSV output).
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Ceiling with a snap tolerance: values within `1e-12` (relative to the
/// magnitude, with an absolute floor) of an integer are treated as that
/// integer before rounding up, so `ceil(k * c / c)` is `k` on every platform.
pub fn snapped_ceil<F: Scalar>(value: F) -> F {
    let nearest = value.round();
    let tol = F::lit(1e-12) * F::one().max(value.abs());
    if (value - nearest).abs() <= tol {
        nearest
    } else {
        value.ceil()
    }
}
