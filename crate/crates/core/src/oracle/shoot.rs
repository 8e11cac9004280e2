use num_traits::Float;

use crate::error::{Result, RpmError};
use crate::oracle::rk::integrate;
use crate::rpm::ProblemSpec;

fn c<F: Float>(x: f64) -> F {
    F::from(x).expect("representable constant")
}

/// Integration settings. Unset radii are derived from the energy: `r_min`
/// from `r_char`, the matching point at the outermost classical turning
/// point, and `r_max` so that `∫ κ dr` beyond the turning point reaches
/// `decay_target`.
#[derive(Debug, Clone, Copy)]
pub struct ShootConfig<F> {
    pub r_min: Option<F>,
    pub r_match: Option<F>,
    pub r_max: Option<F>,
    pub r_char: F,
    pub decay_target: F,
    pub rtol: F,
    pub atol: F,
    pub max_steps: usize,
}

impl<F: Float> Default for ShootConfig<F> {
    fn default() -> Self {
        ShootConfig {
            r_min: None,
            r_match: None,
            r_max: None,
            r_char: F::one(),
            decay_target: c(32.0),
            rtol: c(1e-12),
            atol: c(1e-13),
            max_steps: 2_000_000,
        }
    }
}

impl<F: Float> ShootConfig<F> {
    /// Tighter tolerances and wider cutoffs, used for the error estimate.
    pub fn refined(&self) -> Self {
        ShootConfig {
            r_min: self.r_min.map(|r| r / c(2.0)),
            r_match: self.r_match,
            r_max: self.r_max.map(|r| r * c(2.0)),
            r_char: self.r_char / c(2.0),
            decay_target: self.decay_target * c(2.0),
            rtol: self.rtol / c(100.0),
            atol: self.atol / c(100.0),
            max_steps: self.max_steps * 4,
        }
    }
}

/// Radii actually used at one energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radii<F> {
    pub r_min: F,
    pub r_match: F,
    pub r_max: F,
}

/// Result of a phase shoot at one energy.
#[derive(Debug, Clone, Copy)]
pub struct Shot<F> {
    /// `(θ_out − θ_in)/π` at the matching point. Equals the number of nodes
    /// exactly at an eigenvalue and crosses each integer only there.
    pub phase: F,
    /// `sin(θ_out − θ_in)`: the normalised Wronskian of the two solutions.
    pub mismatch: F,
    pub radii: Radii<F>,
}

/// Shooting solver for `−u'' + [l(l+1)/r² + σ r^α] u = ε u` in Prüfer form
/// `u = ρ sin θ, u' = ρ cos θ`, which never overflows.
#[derive(Debug, Clone)]
pub struct Shooter<F> {
    l: F,
    alpha: F,
    sigma: F,
    cfg: ShootConfig<F>,
}

impl<F: Float> Shooter<F> {
    pub fn new(spec: &ProblemSpec, cfg: ShootConfig<F>) -> Self {
        Shooter {
            l: c(f64::from(spec.l)),
            alpha: c(spec.exponent.alpha()),
            sigma: c(spec.exponent.sigma().value() as f64),
            cfg,
        }
    }

    pub fn config(&self) -> &ShootConfig<F> {
        &self.cfg
    }

    fn centrifugal(&self) -> F {
        self.l * (self.l + F::one())
    }

    /// `Q(r) = ε − l(l+1)/r² − σ r^α`, so that `u'' = −Q u`.
    pub fn q_of(&self, eps: F, r: F) -> F {
        eps - self.centrifugal() / (r * r) - self.sigma * r.powf(self.alpha)
    }

    fn check_energy(&self, eps: F) -> Result<()> {
        if self.sigma < F::zero() && eps >= F::zero() {
            return Err(RpmError::NonDecaying { eps: eps.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(())
    }

    /// Radius beyond which the potential certainly exceeds `eps`.
    fn far_radius(&self, eps: F) -> F {
        let two = c::<F>(2.0);
        if self.sigma < F::zero() {
            two * (-eps).powf(F::one() / self.alpha) + c(10.0)
        } else {
            two * eps.max(F::one()).powf(F::one() / self.alpha) + two
        }
    }

    /// Outermost classical turning point, or the maximum of `Q` when the
    /// energy lies below the effective potential everywhere.
    pub fn turning_point(&self, eps: F, r_min: F) -> F {
        let far = self.far_radius(eps);
        let ratio = c::<F>(10.0).powf(c(1.0 / 40.0));
        let mut r = far;
        let mut best = (self.q_of(eps, r), r);
        while r > r_min {
            let inner = r / ratio;
            let q = self.q_of(eps, inner);
            if q >= F::zero() {
                // bisect on [inner, r]
                let (mut a, mut b) = (inner, r);
                for _ in 0..100 {
                    let m = (a + b) / c(2.0);
                    if self.q_of(eps, m) >= F::zero() {
                        a = m;
                    } else {
                        b = m;
                    }
                    if b - a <= F::epsilon() * b {
                        break;
                    }
                }
                return (a + b) / c(2.0);
            }
            if q > best.0 {
                best = (q, inner);
            }
            r = inner;
        }
        best.1
    }

    /// Radius where `∫_{r_m}^{R} κ dr` reaches the decay target.
    fn outer_radius(&self, eps: F, r_match: F) -> F {
        let mut r = r_match;
        let mut integral = F::zero();
        let mut kappa = (-self.q_of(eps, r)).max(F::zero()).sqrt();
        let step = c::<F>(0.005);
        let min_h = c::<F>(1e-3);
        while integral < self.cfg.decay_target {
            let h = (step * r).max(min_h);
            let next = (-self.q_of(eps, r + h)).max(F::zero()).sqrt();
            integral = integral + h * (kappa + next) / c(2.0);
            kappa = next;
            r = r + h;
        }
        r
    }

    pub fn radii(&self, eps: F) -> Result<Radii<F>> {
        self.check_energy(eps)?;
        let r_min = self.cfg.r_min.unwrap_or(c::<F>(1e-6) * self.cfg.r_char);
        let r_match = match self.cfg.r_match {
            Some(r) => r,
            None => self.turning_point(eps, r_min).max(r_min * c(10.0)),
        };
        let r_max = match self.cfg.r_max {
            Some(r) => r,
            None => self.outer_radius(eps, r_match),
        };
        if !(F::zero() < r_min && r_min < r_match && r_match < r_max) {
            return Err(RpmError::Integration(format!(
                "radii must satisfy 0 < r_min < r_match < r_max, got {:?} {:?} {:?}",
                r_min.to_f64(),
                r_match.to_f64(),
                r_max.to_f64()
            )));
        }
        Ok(Radii { r_min, r_match, r_max })
    }

    /// Prüfer angle of the regular solution at `r_min`, from the two-term
    /// Frobenius series `u = r^{l+1}(1 + a r^{α+2} + b r²)`.
    fn start_angle(&self, eps: F, r: F) -> F {
        let one = F::one();
        let two = c::<F>(2.0);
        let l = self.l;
        let a = self.sigma / ((self.alpha + two) * (two * l + self.alpha + c(3.0)));
        let b = -eps / (two * (two * l + c(3.0)));
        let ra = r.powf(self.alpha + two);
        let r2 = r * r;
        // u / r^{l+1} and r·u' / r^{l+1}
        let u = one + a * ra + b * r2;
        let du = (l + one) + a * (l + self.alpha + c(3.0)) * ra + b * (l + c(3.0)) * r2;
        // θ = atan2(u, u') with the common positive factor r^l removed
        (u * r).atan2(du)
    }

    fn rhs(&self, eps: F) -> impl Fn(F, F) -> F + '_ {
        move |r, theta| {
            let (s, co) = theta.sin_cos();
            co * co + self.q_of(eps, r) * s * s
        }
    }

    fn outward(&self, eps: F, radii: &Radii<F>, to: F) -> Result<F> {
        let theta0 = self.start_angle(eps, radii.r_min);
        integrate(self.rhs(eps), radii.r_min, to, theta0, self.cfg.rtol, self.cfg.atol, self.cfg.max_steps)
    }

    fn inward(&self, eps: F, radii: &Radii<F>) -> Result<F> {
        let kappa = (-self.q_of(eps, radii.r_max)).max(F::zero()).sqrt();
        // u'/u = −κ: θ in (π/2, π)
        let theta0 = F::one().atan2(-kappa);
        integrate(self.rhs(eps), radii.r_max, radii.r_match, theta0, self.cfg.rtol, self.cfg.atol, self.cfg.max_steps)
    }

    pub fn shoot(&self, eps: F) -> Result<Shot<F>> {
        let radii = self.radii(eps)?;
        let theta_out = self.outward(eps, &radii, radii.r_match)?;
        let theta_in = self.inward(eps, &radii)?;
        let diff = theta_out - theta_in;
        Ok(Shot { phase: diff / c(std::f64::consts::PI), mismatch: diff.sin(), radii })
    }

    /// Nodes of the regular solution on `(0, r_max)`: the Dirichlet count,
    /// equal to the number of eigenvalues below `eps` up to truncation.
    pub fn dirichlet_nodes(&self, eps: F) -> Result<u32> {
        let radii = self.radii(eps)?;
        let theta = self.outward(eps, &radii, radii.r_max)?;
        Ok((theta / c(std::f64::consts::PI)).floor().to_u32().unwrap_or(0))
    }

    /// Node count of the matched solution at an eigenvalue: nodes of the
    /// outward solution on `(0, r_m)` plus those of the inward solution on
    /// `(r_m, r_max)`.
    pub fn matched_nodes(&self, eps: F) -> Result<u32> {
        let radii = self.radii(eps)?;
        let pi = c::<F>(std::f64::consts::PI);
        let theta_out = self.outward(eps, &radii, radii.r_match)?;
        let theta_in = self.inward(eps, &radii)?;
        let inner = (theta_out / pi).floor();
        let start_in = (F::one().atan2(-(-self.q_of(eps, radii.r_max)).max(F::zero()).sqrt()) / pi).floor();
        let outer = start_in - (theta_in / pi).floor();
        Ok((inner + outer).max(F::zero()).to_u32().unwrap_or(0))
    }

    /// The `ν`-th eigenvalue, by bracketing `phase(ε) = ν` and refining
    /// with a safeguarded regula falsi.
    pub fn eigenvalue(&self, nu: u32, rel_tol: F) -> Result<F> {
        let target = c::<F>(f64::from(nu));
        let phase = |e: F| -> Result<F> { Ok(self.shoot(e)?.phase - target) };
        let not_found = |reason: &str| RpmError::StateNotFound { nu, reason: reason.to_string() };
        let two = c::<F>(2.0);

        let (mut lo, mut hi);
        if self.sigma < F::zero() {
            lo = -F::one();
            let mut tries = 0;
            while phase(lo)? >= F::zero() {
                lo = lo * two;
                tries += 1;
                if tries > 60 {
                    return Err(not_found("no energy below the state"));
                }
            }
            hi = lo;
            loop {
                hi = hi / two;
                if phase(hi)? > F::zero() {
                    break;
                }
                if hi > c(-1e-9) {
                    return Err(not_found("state too close to the continuum threshold"));
                }
                lo = hi;
            }
        } else {
            lo = F::zero();
            hi = F::one();
            let mut tries = 0;
            while phase(hi)? <= F::zero() {
                lo = hi;
                hi = hi * two;
                tries += 1;
                if tries > 60 {
                    return Err(not_found("no energy above the state"));
                }
            }
            // ε = 0 is below every level of a positive potential, but the
            // inner radius must stay positive
            if lo == F::zero() {
                lo = hi * c(1e-9);
            }
        }

        let mut flo = phase(lo)?;
        let mut fhi = phase(hi)?;
        if !(flo < F::zero() && fhi > F::zero()) {
            return Err(not_found("bracket lost"));
        }
        let mut side = 0i8;
        for _ in 0..300 {
            if (hi - lo).abs() <= rel_tol * lo.abs().max(hi.abs()) {
                break;
            }
            let mut m = (lo * fhi - hi * flo) / (fhi - flo);
            let width = hi - lo;
            if !(m > lo + width * c(1e-3) && m < hi - width * c(1e-3)) {
                m = (lo + hi) / two;
            }
            let fm = phase(m)?;
            if fm == F::zero() {
                return Ok(m);
            }
            if fm < F::zero() {
                lo = m;
                flo = fm;
                if side == -1 {
                    fhi = fhi / two;
                }
                side = -1;
            } else {
                hi = m;
                fhi = fm;
                if side == 1 {
                    flo = flo / two;
                }
                side = 1;
            }
        }
        Ok((lo + hi) / two)
    }
}

/// Eigenvalue with an achieved-accuracy bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue<F> {
    pub value: F,
    pub error_bound: F,
    pub nodes: u32,
}

/// `sin(θ_out − θ_in)` at the matching point: continuous in `ε`, zero at
/// eigenvalues.
pub fn shoot_mismatch<F: Float>(spec: &ProblemSpec, cfg: &ShootConfig<F>, eps: F) -> Result<F> {
    Ok(Shooter::new(spec, *cfg).shoot(eps)?.mismatch)
}

/// The `ν`-th eigenvalue with default settings; the error bound is the
/// change under refined settings plus the bracketing tolerance.
pub fn oracle_eigenvalue(spec: &ProblemSpec, nu: u32) -> Result<OracleValue<f64>> {
    oracle_eigenvalue_with(spec, nu, &ShootConfig::default())
}

pub fn oracle_eigenvalue_with<F: Float>(spec: &ProblemSpec, nu: u32, cfg: &ShootConfig<F>) -> Result<OracleValue<F>> {
    let tol = c::<F>(1e-12).max(F::epsilon() * c(16.0));
    let coarse = Shooter::new(spec, *cfg);
    let value = coarse.eigenvalue(nu, tol)?;
    let fine = Shooter::new(spec, cfg.refined()).eigenvalue(nu, tol)?;
    let nodes = coarse.matched_nodes(value)?;
    let error_bound = (value - fine).abs() + tol * value.abs() * c(2.0);
    Ok(OracleValue { value, error_bound, nodes })
}

/// Upper end of a search window holding levels `0..=nu_max`: the midpoint
/// between levels `nu_max` and `nu_max + 1` of angular momentum `l`.
pub fn upper_window(spec: &ProblemSpec, nu_max: u32) -> Result<f64> {
    let shooter = Shooter::new(spec, ShootConfig::<f64>::default());
    let a = shooter.eigenvalue(nu_max, 1e-6)?;
    let b = shooter.eigenvalue(nu_max + 1, 1e-6)?;
    Ok((a + b) / 2.0)
}
