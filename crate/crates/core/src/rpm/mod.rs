//! Exponent reduction, the coefficient recurrence, unit scaling and Hankel
//! determinants.

mod coeffs;
mod exact;
mod exponent;
mod hankel;
mod units;

pub use coeffs::{build_coefficients, compress_parity, hankel_max_index, CoefficientTable};
pub use exact::{bareiss, hankel_det_at_rational, hankel_det_exact, EXACT_DIM_MAX};
pub use exponent::{parse_exponent, reduce_exponent, ExponentSpec, ProblemSpec, Sign};
pub use hankel::{
    det_full_pivot, hankel_det_value, hankel_matrix_indices, CheckedHankel, HankelEvaluator, HankelValue,
    ValueStatus, MIN_TRUSTED_BITS, SHADOW_BITS,
};
pub use units::{scale_to_dimensionless, scale_to_physical, UnitScale};
