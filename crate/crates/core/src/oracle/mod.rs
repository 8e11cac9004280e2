//! Independent shooting solver for the radial equation, used to validate
//! Hankel eigenvalues and to settle doubtful reference values.

mod rk;
mod shoot;

pub use rk::integrate;
pub use shoot::{
    oracle_eigenvalue, oracle_eigenvalue_with, shoot_mismatch, upper_window, OracleValue, Radii, ShootConfig,
    Shooter, Shot,
};
