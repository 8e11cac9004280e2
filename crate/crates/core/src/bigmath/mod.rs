//! Exact rationals, explicit-precision binary floats and dense polynomials.

mod poly;
mod rational;
mod real;

pub use poly::{poly_add, poly_eval, poly_mul, Polynomial, Ring};
pub use rational::BigRational;
pub use real::{BigFloat, Real};
