//! Riccati–Padé eigenvalues for the radial Schrödinger equation with a
//! power-law potential `V(r) = σ r^(p/q)`.
//!
//! Layers, bottom up:
//!
//! * [`bigmath`]: exact rationals, explicit-precision floats and dense
//!   polynomials, with the [`Real`] scalar trait the numeric kernels are
//!   generic over.
//! * [`rpm`]: exponent reduction, the Taylor-coefficient recurrence for the
//!   regularised logarithmic derivative, parity compression, unit scaling
//!   and Hankel determinants (numeric and exact).
//! * [`eigensolve`]: root isolation of `H_D^d(ε)`, tracking of root
//!   sequences over `D`, convergence assessment and state labelling.
//! * [`oracle`]: an independent shooting solver used for validation.

pub mod bigmath;
pub mod eigensolve;
mod error;
pub mod oracle;
pub mod rpm;

pub use bigmath::{BigFloat, BigRational, Polynomial, Real};
pub use error::{Result, RpmError};

/// Polynomials in `ε` with exact rational coefficients.
pub type RationalPoly = Polynomial<BigRational>;
/// Polynomials with double-precision coefficients.
pub type F64Poly = Polynomial<f64>;
/// Hankel evaluator at explicit binary precision.
pub type BigHankel = rpm::HankelEvaluator<BigFloat>;
/// Hankel evaluator in double precision.
pub type F64Hankel = rpm::HankelEvaluator<f64>;
/// Oracle in double precision.
pub type F64Oracle = oracle::Shooter<f64>;
