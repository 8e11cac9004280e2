use crate::bigmath::{BigFloat, Real};
use crate::error::{Result, RpmError};

/// Length and energy units that turn `−ħ²/(2m) Δ + V0 r^α` into the
/// dimensionless `−Δ + σ r^α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScale {
    pub hbar: f64,
    pub mass: f64,
    pub v0: f64,
    pub alpha: f64,
    /// `r0 = [ħ²/(2m|V0|)]^{1/(α+2)}`
    pub r0: f64,
    /// `e0 = ħ²/(2m r0²) = (ħ²/2m)^{α/(α+2)} |V0|^{2/(α+2)}`
    pub e0: f64,
}

impl UnitScale {
    pub fn new(hbar: f64, mass: f64, v0: f64, alpha: f64) -> Result<Self> {
        let bad = |m: &str| Err(RpmError::InvalidUnits(m.to_string()));
        if !(hbar > 0.0 && hbar.is_finite()) {
            return bad("hbar must be positive");
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return bad("mass must be positive");
        }
        if v0 == 0.0 || !v0.is_finite() {
            return bad("V0 must be nonzero");
        }
        if !(alpha >= -1.0) || alpha == 0.0 || !alpha.is_finite() {
            return bad("alpha must be nonzero and at least -1");
        }
        if v0.signum() != alpha.signum() {
            return bad("sign(V0) must equal sign(alpha) for bound states");
        }
        let kinetic = hbar * hbar / (2.0 * mass);
        let r0 = (kinetic / v0.abs()).powf(1.0 / (alpha + 2.0));
        let e0 = kinetic / (r0 * r0);
        Ok(UnitScale { hbar, mass, v0, alpha, r0, e0 })
    }
}

/// Physical energy `E = ε e0`, at the precision of `eps`.
pub fn scale_to_physical(units: &UnitScale, eps: &BigFloat) -> BigFloat {
    eps * &BigFloat::from_f64_like(units.e0, eps)
}

/// Dimensionless energy `ε = E / e0`.
pub fn scale_to_dimensionless(units: &UnitScale, energy: &BigFloat) -> BigFloat {
    energy.clone() / &BigFloat::from_f64_like(units.e0, energy)
}
