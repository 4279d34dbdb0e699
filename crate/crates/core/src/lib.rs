//! Exact and high-precision evaluation of multiple t-values, t-star values,
//! their finite truncations and the generating functions built from them.

pub mod error;
pub mod evaluations;
pub mod finite;
pub mod index;
mod kernel;
pub mod numerics;
pub mod series;
pub mod suites;

pub use error::{Error, Result};
pub use index::{BlockForm, Index, ParsedIndex, Sign, SignedIndex};
pub use numerics::{BigReal, BoundKind, ExactRational, Precision, TruncatedValue};
