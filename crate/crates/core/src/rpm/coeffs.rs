use std::sync::Arc;

use num_traits::Zero;
use rug::{Assign, Rational};

use crate::bigmath::BigRational;
use crate::error::{Result, RpmError};
use crate::rpm::ProblemSpec;
use crate::RationalPoly;

/// Taylor coefficients `g_0 … g_N` of the regularised logarithmic derivative
/// in `z = r^(1/q)`, each an exact polynomial in `ε`.
///
/// A compressed table (see [`CoefficientTable::compress_parity`]) stores
/// `g_{2j+1}` at index `j`. Tables are immutable; the coefficient vector is
/// shared, so clones are cheap.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    spec: ProblemSpec,
    coeffs: Arc<Vec<RationalPoly>>,
    compressed: bool,
}

impl CoefficientTable {
    /// Runs the recurrence for `n = 0..=n_max`.
    pub fn build(spec: ProblemSpec, n_max: usize) -> Self {
        let mut coeffs = Vec::with_capacity(n_max + 1);
        extend_recurrence(&spec, &mut coeffs, n_max);
        CoefficientTable { spec, coeffs: Arc::new(coeffs), compressed: false }
    }

    /// A table reaching `n_max`, reusing the already computed prefix.
    pub fn extend(&self, n_max: usize) -> Self {
        assert!(!self.compressed, "extend the uncompressed table and compress again");
        if n_max <= self.n_max() {
            return self.clone();
        }
        let mut coeffs = (*self.coeffs).clone();
        extend_recurrence(&self.spec, &mut coeffs, n_max);
        CoefficientTable { spec: self.spec, coeffs: Arc::new(coeffs), compressed: false }
    }

    /// The table a `D_max × D_max` Hankel sweep with offset `d` needs:
    /// parity-compressed when the exponent is parity-odd.
    pub fn for_hankel(spec: ProblemSpec, dim_max: usize, d: usize) -> Self {
        let top = hankel_max_index(dim_max, d);
        if spec.exponent.parity_odd() {
            Self::build(spec, 2 * top + 1).compress_parity().expect("parity-odd spec")
        } else {
            Self::build(spec, top)
        }
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn is_compressed(&self) -> bool {
        self.compressed
    }

    /// Highest stored index.
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&RationalPoly> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[RationalPoly] {
        &self.coeffs
    }

    /// Keeps only the odd-index coefficients, re-indexed so entry `j` is
    /// `g_{2j+1}`; the expansion variable becomes `z²`.
    pub fn compress_parity(&self) -> Result<Self> {
        if self.compressed {
            return Err(RpmError::AlreadyCompressed);
        }
        if !self.spec.exponent.parity_odd() {
            return Err(RpmError::NotParityOdd);
        }
        let odd: Vec<RationalPoly> = self.coeffs.iter().skip(1).step_by(2).cloned().collect();
        Ok(CoefficientTable { spec: self.spec, coeffs: Arc::new(odd), compressed: true })
    }

    /// Errors unless every index a `dim × dim` Hankel matrix with offset `d`
    /// touches is present.
    pub fn check_covers(&self, dim: usize, d: usize) -> Result<()> {
        if dim == 0 {
            return Err(RpmError::EmptyHankel);
        }
        let needed = hankel_max_index(dim, d);
        if needed > self.n_max() {
            return Err(RpmError::TableTooShort { needed, available: self.n_max() });
        }
        Ok(())
    }
}

/// Largest coefficient index in `H_D^d`: `2D + d − 1`.
pub fn hankel_max_index(dim: usize, d: usize) -> usize {
    2 * dim + d - 1
}

fn extend_recurrence(spec: &ProblemSpec, coeffs: &mut Vec<RationalPoly>, n_max: usize) {
    let q = spec.exponent.q() as usize;
    let p_plus_q = (spec.exponent.p() + spec.exponent.q()) as usize;
    let sigma = spec.exponent.sigma().value();
    let l = i64::from(spec.l);
    let qi = spec.exponent.q();
    let mut tmp = Rational::new();

    for n in coeffs.len()..=n_max {
        // Σ_{j=0}^{n−q} g_j g_{n−q−j}, using the symmetry j ↔ n−q−j.
        let mut acc: Vec<Rational> = Vec::new();
        if n >= q {
            let m = n - q;
            for j in 0..=m / 2 {
                let (a, b) = (&coeffs[j], &coeffs[m - j]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let weight = if 2 * j == m { 1 } else { 2 };
                let need = a.coeffs().len() + b.coeffs().len() - 1;
                if acc.len() < need {
                    acc.resize_with(need, Rational::new);
                }
                for (i, ai) in a.coeffs().iter().enumerate() {
                    if ai.is_zero() {
                        continue;
                    }
                    for (k, bk) in b.coeffs().iter().enumerate() {
                        tmp.assign(ai.as_inner() * bk.as_inner());
                        if weight == 2 {
                            tmp <<= 1;
                        }
                        acc[i + k] += &tmp;
                    }
                }
            }
        }
        if n == q {
            if acc.len() < 2 {
                acc.resize_with(2, Rational::new);
            }
            acc[1] += 1;
        }
        if n == p_plus_q {
            if acc.is_empty() {
                acc.push(Rational::new());
            }
            acc[0] -= sigma;
        }
        // 1 / (2l + n/q + 2) = q / (2lq + n + 2q)
        let scale = Rational::from((qi, 2 * l * qi + n as i64 + 2 * qi));
        for c in acc.iter_mut() {
            *c *= &scale;
        }
        coeffs.push(RationalPoly::new(acc.into_iter().map(BigRational::from_inner).collect()));
    }
}

/// Builds the table for `spec` up to `n_max`.
pub fn build_coefficients(spec: ProblemSpec, n_max: usize) -> CoefficientTable {
    CoefficientTable::build(spec, n_max)
}

/// Parity-compressed view of `table`.
pub fn compress_parity(table: &CoefficientTable) -> Result<CoefficientTable> {
    table.compress_parity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::Polynomial;
    use crate::rpm::{reduce_exponent, Sign};
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n, d)
    }

    fn spec(p: i64, qq: i64, s: Sign, l: u32) -> ProblemSpec {
        ProblemSpec::new(reduce_exponent(p, qq, s).unwrap(), l)
    }

    #[test]
    fn coulomb_first_coefficients() {
        let t = build_coefficients(spec(-1, 1, Sign::Minus, 0), 3);
        assert_eq!(t.get(0).unwrap(), &Polynomial::constant(q(1, 2)));
        // (1/4 + ε)/3
        assert_eq!(t.get(1).unwrap(), &Polynomial::new(vec![q(1, 12), q(1, 3)]));
    }

    #[test]
    fn minus_half_first_coefficients() {
        let t = build_coefficients(spec(-1, 2, Sign::Minus, 0), 4);
        assert!(t.get(0).unwrap().is_zero());
        assert_eq!(t.get(1).unwrap(), &Polynomial::constant(q(2, 5)));
        assert_eq!(t.get(2).unwrap(), &Polynomial::new(vec![q(0, 1), q(1, 3)]));
    }

    #[test]
    fn g0_vanishes_when_p_plus_q_positive() {
        for (p, qq, s) in [(1, 2, Sign::Plus), (2, 1, Sign::Plus), (-1, 3, Sign::Minus), (-2, 3, Sign::Minus)] {
            let t = build_coefficients(spec(p, qq, s, 1), 2);
            assert!(t.get(0).unwrap().is_zero(), "{p}/{qq}");
        }
    }

    #[test]
    fn parity_zeros_and_compression() {
        for l in 0..3 {
            let t = build_coefficients(spec(-2, 3, Sign::Minus, l), 6);
            for k in [0, 2, 4, 6] {
                assert!(t.get(k).unwrap().is_zero(), "g_{k} l={l}");
            }
            let c = t.compress_parity().unwrap();
            assert_eq!(c.len(), 3);
            for j in 0..3 {
                assert_eq!(c.get(j), t.get(2 * j + 1));
                assert!(!c.get(j).unwrap().is_zero());
            }
        }
        let t = build_coefficients(spec(-1, 2, Sign::Minus, 0), 6);
        assert_eq!(t.compress_parity().unwrap_err(), RpmError::NotParityOdd);
    }

    #[test]
    fn extend_matches_fresh_build() {
        let s = spec(1, 2, Sign::Plus, 2);
        let short = build_coefficients(s, 10);
        let long = short.extend(25);
        let fresh = build_coefficients(s, 25);
        assert_eq!(long.coeffs(), fresh.coeffs());
    }

    #[test]
    fn hankel_cover_check() {
        let s = spec(-1, 2, Sign::Minus, 0);
        let t = build_coefficients(s, 6);
        assert!(t.check_covers(3, 2).is_err());
        assert!(build_coefficients(s, 7).check_covers(3, 2).is_ok());
        let c = CoefficientTable::for_hankel(spec(-2, 3, Sign::Minus, 0), 3, 2);
        assert!(c.is_compressed());
        assert_eq!(c.n_max(), 7);
        assert!(t.check_covers(0, 2).is_err());
    }

    #[test]
    fn one_is_the_unit() {
        let p: RationalPoly = Polynomial::one();
        assert_eq!(p.degree(), Some(0));
    }
}
