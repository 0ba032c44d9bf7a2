// Dense matrix code indexes several arrays per loop.
#![allow(clippy::needless_range_loop)]

pub mod builtin;
pub mod complex;
pub mod error;
pub mod flow;
pub mod gradient;
pub mod homology;
pub mod matrix;
pub mod metric;
pub mod morse;
pub mod subdivision;

/// Exact rational scalars used for function values and metric data.
pub type Rational = num_rational::BigRational;

pub use complex::{CellComplex, CellId};
pub use error::{Error, Result};
pub use morse::MorseFunction;
