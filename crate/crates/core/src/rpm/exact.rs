use num_traits::Zero;
use rug::{Assign, Rational};

use crate::bigmath::BigRational;

use crate::error::{Result, RpmError};
use crate::rpm::CoefficientTable;
use crate::RationalPoly;

/// Largest dimension accepted by [`hankel_det_exact`].
pub const EXACT_DIM_MAX: usize = 8;

/// `H_D^d(ε)` as an exact polynomial, by fraction-free (Bareiss)
/// elimination over `ℚ[ε]`. Meant as a small-`D` cross-check of the numeric
/// path.
pub fn hankel_det_exact(table: &CoefficientTable, dim: usize, d: usize) -> Result<RationalPoly> {
    if dim > EXACT_DIM_MAX {
        return Err(RpmError::ExactDimensionTooLarge { dim, max: EXACT_DIM_MAX });
    }
    table.check_covers(dim, d)?;
    let mut a: Vec<Vec<RationalPoly>> = (0..dim)
        .map(|i| (0..dim).map(|j| table.get(i + j + d + 1).expect("covered").clone()).collect())
        .collect();
    Ok(bareiss(&mut a))
}

/// `H_D^d(x)` evaluated exactly at a rational point, by Gaussian
/// elimination over `ℚ`. Unlike [`hankel_det_exact`] there is no dimension
/// cap; the cost grows with the size of `x`'s numerator and denominator.
pub fn hankel_det_at_rational(table: &CoefficientTable, dim: usize, d: usize, x: &BigRational) -> Result<BigRational> {
    table.check_covers(dim, d)?;
    let g: Vec<Rational> = (d + 1..=2 * dim + d - 1)
        .map(|n| table.get(n).expect("covered").eval(x).into_inner())
        .collect();
    let mut a: Vec<Vec<Rational>> = (0..dim).map(|i| g[i..i + dim].to_vec()).collect();
    let mut det = Rational::from(1);
    let mut tmp = Rational::new();
    for k in 0..dim {
        let p = match (k..dim).find(|&i| a[i][k] != 0) {
            Some(p) => p,
            None => return Ok(BigRational::zero()),
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        det *= &pivot[k];
        for row in rest.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let m = Rational::from(&row[k] / &pivot[k]);
            for j in k + 1..dim {
                tmp.assign(&m * &pivot[j]);
                row[j] -= &tmp;
            }
        }
    }
    Ok(BigRational::from_inner(det))
}

/// Determinant of a square polynomial matrix; the matrix is consumed as
/// scratch space.
pub fn bareiss(a: &mut [Vec<RationalPoly>]) -> RationalPoly {
    let n = a.len();
    let mut negate = false;
    let mut prev = RationalPoly::constant(1.into());
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return RationalPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpm::{build_coefficients, reduce_exponent, ProblemSpec, Sign};

    fn spec(p: i64, q: i64, s: Sign, l: u32) -> ProblemSpec {
        ProblemSpec::new(reduce_exponent(p, q, s).unwrap(), l)
    }

    fn c(v: i64) -> RationalPoly {
        RationalPoly::constant(BigRational::from_integer(v))
    }

    #[test]
    fn bareiss_constant_matrices() {
        let mut m = vec![vec![c(0), c(2), c(1)], vec![c(1), c(1), c(0)], vec![c(3), c(0), c(1)]];
        assert_eq!(bareiss(&mut m), c(-5));
        let mut s = vec![vec![c(1), c(2)], vec![c(2), c(4)]];
        assert!(bareiss(&mut s).is_zero());
    }

    #[test]
    fn one_by_one_minus_half() {
        let t = build_coefficients(spec(-1, 2, Sign::Minus, 0), 2);
        assert_eq!(hankel_det_exact(&t, 1, 0).unwrap(), RationalPoly::constant(BigRational::new(2, 5)));
    }

    #[test]
    fn coulomb_root() {
        let t = build_coefficients(spec(-1, 1, Sign::Minus, 0), 6);
        let h = hankel_det_exact(&t, 2, 2).unwrap();
        assert!(!h.is_zero());
        assert!(h.eval(&BigRational::new(-1, 4)).is_zero());
    }

    #[test]
    fn rational_point_matches_polynomial() {
        let t = build_coefficients(spec(-1, 2, Sign::Minus, 1), 20);
        for dim in 1..=5 {
            let h = hankel_det_exact(&t, dim, 2).unwrap();
            for x in [BigRational::new(-3, 7), BigRational::new(-1, 5)] {
                assert_eq!(hankel_det_at_rational(&t, dim, 2, &x).unwrap(), h.eval(&x), "D={dim}");
            }
        }
        let coulomb = build_coefficients(spec(-1, 1, Sign::Minus, 0), 90);
        assert!(hankel_det_at_rational(&coulomb, 40, 2, &BigRational::new(-1, 4)).unwrap().is_zero());
    }

    #[test]
    fn dimension_cap() {
        let t = build_coefficients(spec(-1, 2, Sign::Minus, 0), 30);
        assert_eq!(
            hankel_det_exact(&t, 9, 2).unwrap_err(),
            RpmError::ExactDimensionTooLarge { dim: 9, max: 8 }
        );
    }
}
