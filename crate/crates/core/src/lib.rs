//! Exact divisor theory on metric graphs with chain structures, pre-limit linear series on
//! curves whose components are projective lines, smoothability verdicts and divisor lifting.

pub mod divisor;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod lifting;
pub mod p1;
pub mod series;
pub mod smoothing;
pub mod twisting;

pub use error::{Error, Result};

/// Exact rationals, the only number type used for positions and coefficients.
pub type Q = num_rational::BigRational;
