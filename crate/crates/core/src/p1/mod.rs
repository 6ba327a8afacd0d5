//! Rational functions, divisors and linear series on marked projective lines over the rationals.

pub mod linalg;
pub mod parse;
pub mod point;
pub mod poly;
pub mod pool;
pub mod ratfunc;
pub mod space;

pub use point::{Point, PointDivisor};
pub use poly::Poly;
pub use pool::ConstantPool;
pub use ratfunc::RatFunc;
pub use space::{construct_function, FunctionSpace, MarkedComponent, Predicate};
