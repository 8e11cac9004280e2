use std::fmt;
use std::str::FromStr;

use crate::error::{Result, RpmError};

/// Sign of the reduced coupling, `σ = sign(V0) = sign(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn of(x: i64) -> Option<Sign> {
        match x.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Plus => "+",
        })
    }
}

impl FromStr for Sign {
    type Err = RpmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-" | "-1" | "minus" | "neg" => Ok(Sign::Minus),
            "+" | "1" | "+1" | "plus" | "pos" => Ok(Sign::Plus),
            other => Err(RpmError::Invalid(format!("unrecognised sign {other:?}"))),
        }
    }
}

/// Reduced exponent `α = p/q` of the potential together with `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentSpec {
    p: i64,
    q: i64,
    sigma: Sign,
    parity_odd: bool,
}

impl ExponentSpec {
    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn sigma(&self) -> Sign {
        self.sigma
    }

    /// True when `q` and `p + q` are both odd, so the expansion is odd in `z`.
    pub fn parity_odd(&self) -> bool {
        self.parity_odd
    }

    pub fn alpha(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl fmt::Display for ExponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} (sigma {})", self.p, self.q, self.sigma)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brings `p_raw/q_raw` to lowest terms with `q > 0` and validates it
/// against the supported range `α ≥ −1` and the sign convention.
pub fn reduce_exponent(p_raw: i64, q_raw: i64, sigma: Sign) -> Result<ExponentSpec> {
    if q_raw == 0 {
        return Err(RpmError::ZeroDenominator);
    }
    if p_raw == 0 {
        return Err(RpmError::ZeroExponent);
    }
    let g = gcd(p_raw, q_raw);
    let (mut p, mut q) = (p_raw / g, q_raw / g);
    if q < 0 {
        p = -p;
        q = -q;
    }
    if p + q < 0 {
        return Err(RpmError::ExponentOutOfRange { p, q });
    }
    if Sign::of(p) != Some(sigma) {
        return Err(RpmError::SignMismatch { p, q, sigma: sigma.value() as i32 });
    }
    let parity_odd = q % 2 != 0 && (p + q) % 2 != 0;
    Ok(ExponentSpec { p, q, sigma, parity_odd })
}

/// Parses `"p/q"` (or a bare integer `"p"`) and reduces it.
pub fn parse_exponent(alpha: &str, sigma: Sign) -> Result<ExponentSpec> {
    let bad = || RpmError::Invalid(format!("cannot parse exponent {alpha:?}; expected p/q"));
    let (p, q) = match alpha.trim().split_once('/') {
        Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
        None => (alpha.trim().parse().map_err(|_| bad())?, 1),
    };
    reduce_exponent(p, q, sigma)
}

/// Potential exponent plus angular momentum `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProblemSpec {
    pub exponent: ExponentSpec,
    pub l: u32,
}

impl ProblemSpec {
    pub fn new(exponent: ExponentSpec, l: u32) -> Self {
        ProblemSpec { exponent, l }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_half() {
        let e = reduce_exponent(-1, 2, Sign::Minus).unwrap();
        assert_eq!((e.p(), e.q(), e.parity_odd()), (-1, 2, false));
    }

    #[test]
    fn minus_two_thirds_is_parity_odd() {
        let e = reduce_exponent(-2, 3, Sign::Minus).unwrap();
        assert_eq!((e.p(), e.q(), e.parity_odd()), (-2, 3, true));
        assert!(reduce_exponent(2, 3, Sign::Plus).unwrap().parity_odd());
    }

    #[test]
    fn lowest_terms() {
        let e = reduce_exponent(2, 4, Sign::Plus).unwrap();
        assert_eq!((e.p(), e.q(), e.parity_odd()), (1, 2, false));
        let e = reduce_exponent(1, -2, Sign::Minus).unwrap();
        assert_eq!((e.p(), e.q()), (-1, 2));
    }

    #[test]
    fn domain_errors() {
        assert_eq!(
            reduce_exponent(-3, 2, Sign::Minus),
            Err(RpmError::ExponentOutOfRange { p: -3, q: 2 })
        );
        assert_eq!(reduce_exponent(0, 5, Sign::Plus), Err(RpmError::ZeroExponent));
        assert!(matches!(reduce_exponent(1, 2, Sign::Minus), Err(RpmError::SignMismatch { .. })));
        assert_eq!(reduce_exponent(1, 0, Sign::Plus), Err(RpmError::ZeroDenominator));
        // α = −1 is the boundary and allowed
        assert!(reduce_exponent(-1, 1, Sign::Minus).is_ok());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_exponent("-1/2", Sign::Minus).unwrap().q(), 2);
        assert_eq!(parse_exponent("2", Sign::Plus).unwrap().p(), 2);
        assert!(parse_exponent("x/2", Sign::Plus).is_err());
        assert_eq!("-".parse::<Sign>().unwrap(), Sign::Minus);
    }
}
