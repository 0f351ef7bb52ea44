//! Dynamic bi-objective travelling thief problem toolkit.
//!
//! The core is generic over the scalar type (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the harness and the CLI use.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod evolve;
pub mod harness;
pub mod instance;
pub mod metrics;
pub mod rng;
pub mod scalar;
pub mod solvers;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Instance = instance::TtpInstance<f64>;
pub type Instance32 = instance::TtpInstance<f32>;
pub type Evaluation = instance::Evaluation<f64>;
pub type Point = metrics::Point<f64>;
pub type Population = evolve::Population<f64>;
pub type RunTrace = evolve::RunTrace<f64>;
