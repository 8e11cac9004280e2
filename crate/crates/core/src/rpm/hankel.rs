use crate::bigmath::{BigFloat, BigRational, Real};
use crate::error::Result;
use crate::rpm::{hankel_det_at_rational, CoefficientTable};

/// Coefficient index of every entry of `H_D^d`: `i + j + d − 1` for
/// `i, j = 1..=D`.
pub fn hankel_matrix_indices(dim: usize, d: usize) -> Vec<Vec<usize>> {
    (1..=dim).map(|i| (1..=dim).map(|j| i + j + d - 1).collect()).collect()
}

/// Numeric evaluator for `H_D^d(ε)` at the precision of a prototype value.
///
/// Coefficients are converted once (correctly rounded); each evaluation runs
/// Horner on every needed `g_n`, then an LU factorisation with full pivoting.
/// An entry whose computed magnitude does not exceed its Horner rounding
/// bound is indistinguishable from zero at this precision and is stored as
/// an exact zero.
#[derive(Clone, Debug)]
pub struct HankelEvaluator<T: Real> {
    dim: usize,
    d: usize,
    /// `coeffs[k]` holds the coefficients of table entry `d + 1 + k`.
    coeffs: Vec<Vec<T>>,
    log2_abs: Vec<Vec<f64>>,
    like: T,
}

impl<T: Real> HankelEvaluator<T> {
    pub fn new(table: &CoefficientTable, dim: usize, d: usize, like: &T) -> Result<Self> {
        table.check_covers(dim, d)?;
        let first = d + 1;
        let last = 2 * dim + d - 1;
        let mut coeffs = Vec::with_capacity(last + 1 - first);
        let mut log2_abs = Vec::with_capacity(last + 1 - first);
        for n in first..=last {
            let poly = table.get(n).expect("checked above");
            coeffs.push(poly.coeffs().iter().map(|c| T::from_rational_like(c, like)).collect());
            log2_abs.push(poly.coeffs().iter().map(|c| c.log2_abs()).collect());
        }
        Ok(HankelEvaluator { dim, d, coeffs, log2_abs, like: T::zero_like(like) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self) -> usize {
        self.d
    }

    pub fn precision(&self) -> u32 {
        self.like.precision()
    }

    /// Rounds `x` to this evaluator's precision.
    pub fn coerce(&self, x: &T) -> T {
        let mut out = T::zero_like(&self.like);
        out += x;
        out
    }

    /// Values of the table entries `d+1 ..= 2D+d−1` at `eps`.
    pub fn entries(&self, eps: &T) -> Vec<T> {
        let x = self.coerce(eps);
        let log2_x = x.log2_abs();
        let u = self.like.unit_roundoff();
        self.coeffs
            .iter()
            .zip(&self.log2_abs)
            .map(|(cs, mags)| {
                let mut acc = T::zero_like(&x);
                for c in cs.iter().rev() {
                    acc.horner_step(&x, c);
                }
                if acc.is_zero() {
                    return acc;
                }
                // |Horner error| ≤ (2n+2)·u·Σ|c_k||x|^k, summed in log2 space.
                let terms = mags.iter().enumerate().filter(|(_, m)| m.is_finite()).map(|(k, m)| {
                    if k == 0 {
                        *m
                    } else {
                        m + k as f64 * log2_x
                    }
                });
                let log2_bound = log2_sum_exp2(terms)
                    + (2.0 * cs.len() as f64 + 2.0).log2()
                    + u.log2();
                if acc.log2_abs() <= log2_bound {
                    T::zero_like(&x)
                } else {
                    acc
                }
            })
            .collect()
    }

    /// `H_D^d(eps)` without any cancellation check.
    pub fn det(&self, eps: &T) -> T {
        let g = self.entries(eps);
        let n = self.dim;
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(g[i + j].clone());
            }
        }
        det_full_pivot(a, n)
    }
}

fn log2_sum_exp2(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp2()).sum::<f64>().log2()
}

/// Determinant of a row-major `n × n` matrix by Gaussian elimination with
/// full pivoting.
pub fn det_full_pivot<T: Real>(mut a: Vec<T>, n: usize) -> T {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let one = T::one_like(&a[0]);
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut negate = false;
    let mut det = one;
    let mut pivot_row: Vec<T> = Vec::with_capacity(n);

    for k in 0..n {
        let (mut bi, mut bj) = (k, k);
        let mut best = f64::NEG_INFINITY;
        for i in k..n {
            let r = rows[i] * n;
            for j in k..n {
                let m = a[r + cols[j]].log2_abs();
                if m > best {
                    best = m;
                    bi = i;
                    bj = j;
                }
            }
        }
        if best == f64::NEG_INFINITY {
            return T::zero_like(&det);
        }
        if bi != k {
            rows.swap(bi, k);
            negate = !negate;
        }
        if bj != k {
            cols.swap(bj, k);
            negate = !negate;
        }
        let rk = rows[k] * n;
        let pivot = a[rk + cols[k]].clone();
        det *= &pivot;
        pivot_row.clear();
        pivot_row.extend((k + 1..n).map(|j| a[rk + cols[j]].clone()));
        for i in k + 1..n {
            let ri = rows[i] * n;
            let head = &a[ri + cols[k]];
            if head.is_zero() {
                continue;
            }
            let m = head.clone() / &pivot;
            for (off, j) in (k + 1..n).enumerate() {
                a[ri + cols[j]].sub_mul_assign(&m, &pivot_row[off]);
            }
        }
    }
    if negate {
        -det
    } else {
        det
    }
}

/// Whether a checked determinant value can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueStatus {
    /// At least a few leading bits agree between two precisions.
    Trusted,
    /// The value is below the precision floor: its sign is not reliable.
    BelowFloor,
}

/// Determinant value with a cancellation estimate.
#[derive(Debug, Clone)]
pub struct HankelValue {
    pub value: BigFloat,
    /// Estimated number of correct leading bits of `value`.
    pub trusted_bits: f64,
    /// `log2` of the estimated absolute error of `value` (`-inf` when the
    /// two precisions agree exactly).
    pub noise_log2: f64,
    pub status: ValueStatus,
}

impl HankelValue {
    pub fn is_trusted(&self) -> bool {
        self.status == ValueStatus::Trusted
    }

    /// Sign of the value when trusted.
    pub fn sign(&self) -> Option<i32> {
        self.is_trusted().then(|| self.value.signum_i())
    }
}

/// Extra bits of the shadow evaluation used for the cancellation estimate.
pub const SHADOW_BITS: u32 = 32;
/// Minimum agreeing bits for a value to count as trusted.
pub const MIN_TRUSTED_BITS: f64 = 4.0;

/// A pair of evaluators at `B` and `B + 32` bits. The difference of the two
/// results estimates the absolute error at `B`, which exposes catastrophic
/// cancellation near roots of `H_D^d`.
#[derive(Clone, Debug)]
pub struct CheckedHankel {
    main: HankelEvaluator<BigFloat>,
    shadow: HankelEvaluator<BigFloat>,
    table: CoefficientTable,
}

impl CheckedHankel {
    pub fn new(table: &CoefficientTable, dim: usize, d: usize, bits: u32) -> Result<Self> {
        Ok(CheckedHankel {
            main: HankelEvaluator::new(table, dim, d, &BigFloat::zero(bits))?,
            shadow: HankelEvaluator::new(table, dim, d, &BigFloat::zero(bits + SHADOW_BITS))?,
            table: table.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.main.dim()
    }

    pub fn precision(&self) -> u32 {
        self.main.precision()
    }

    pub fn offset(&self) -> usize {
        self.main.offset()
    }

    /// Exact value at a rational point.
    pub fn exact_at(&self, x: &BigRational) -> BigRational {
        hankel_det_at_rational(&self.table, self.dim(), self.offset(), x).expect("table covers the evaluator")
    }

    pub fn fast(&self, eps: &BigFloat) -> BigFloat {
        self.main.det(eps)
    }

    pub fn value(&self, eps: &BigFloat) -> HankelValue {
        let value = self.main.det(eps);
        let reference = self.shadow.det(eps);
        let prec = f64::from(self.main.precision());
        let noise_log2 = (&value - &reference).log2_abs();
        let trusted_bits = if reference.is_zero() {
            if value.is_zero() {
                0.0
            } else {
                // the main value is pure rounding noise
                -1.0
            }
        } else {
            let diff = &value - &reference;
            if diff.is_zero() {
                prec
            } else {
                (reference.log2_abs() - diff.log2_abs()).min(prec)
            }
        };
        let status = if trusted_bits >= MIN_TRUSTED_BITS && value.signum_i() == reference.signum_i() {
            ValueStatus::Trusted
        } else {
            ValueStatus::BelowFloor
        };
        // The shadow result rounded back to B bits is accurate to a few ulp
        // whenever the cancellation stays below the shadow margin.
        let value = if status == ValueStatus::Trusted { reference.with_prec(value.prec()) } else { value };
        HankelValue { value, trusted_bits, noise_log2, status }
    }
}

/// `H_D^d(eps)` at the precision of `eps`, flagged when the value falls
/// below the precision floor.
pub fn hankel_det_value(table: &CoefficientTable, dim: usize, d: usize, eps: &BigFloat) -> Result<HankelValue> {
    Ok(CheckedHankel::new(table, dim, d, eps.prec())?.value(eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rpm::{build_coefficients, reduce_exponent, ProblemSpec, Sign};
    use crate::RpmError;

    fn spec(p: i64, q: i64, s: Sign, l: u32) -> ProblemSpec {
        ProblemSpec::new(reduce_exponent(p, q, s).unwrap(), l)
    }

    #[test]
    fn index_examples() {
        assert_eq!(hankel_matrix_indices(2, 2), vec![vec![3, 4], vec![4, 5]]);
        assert_eq!(hankel_matrix_indices(1, 0), vec![vec![1]]);
        let m = hankel_matrix_indices(3, 2);
        assert_eq!(m.iter().flatten().max(), Some(&7));
    }

    #[test]
    fn full_pivot_determinant_small() {
        // det [[0,2,1],[1,1,0],[3,0,1]] = 0·1 − 2·1 + 1·(−3) = −5
        let a = vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        assert!((det_full_pivot(a, 3) + 5.0).abs() < 1e-14);
        let z = vec![1.0, 2.0, 2.0, 4.0];
        assert_eq!(det_full_pivot(z, 2), 0.0);
        let b: Vec<BigFloat> = [4.0, 3.0, 6.0, 3.0].iter().map(|&v| BigFloat::from_f64(100, v)).collect();
        assert_eq!(det_full_pivot(b, 2).to_f64(), -6.0);
    }

    #[test]
    fn coulomb_ground_state_zeroes_every_determinant() {
        let s = spec(-1, 1, Sign::Minus, 0);
        let table = build_coefficients(s, 40);
        let eps = BigFloat::from_f64(256, -0.25);
        for dim in 1..=12 {
            for d in 1..=3 {
                let v = hankel_det_value(&table, dim, d, &eps).unwrap();
                assert!(v.value.is_zero(), "D={dim} d={d}: {:?}", v.value);
                assert_eq!(v.status, ValueStatus::BelowFloor);
            }
        }
    }

    #[test]
    fn one_by_one_is_g1() {
        let s = spec(-1, 2, Sign::Minus, 0);
        let table = build_coefficients(s, 4);
        let eps = BigFloat::from_f64(128, -0.3);
        let v = hankel_det_value(&table, 1, 0, &eps).unwrap();
        assert_eq!(v.value, BigFloat::from_rational(128, &BigRational::new(2, 5)));
        assert!(v.is_trusted());
        let s = spec(1, 1, Sign::Plus, 1);
        let table = build_coefficients(s, 4);
        let v = hankel_det_value(&table, 1, 0, &eps).unwrap();
        assert_eq!(v.value, table.get(1).unwrap().eval_real(&eps));
    }

    #[test]
    fn minus_half_sign_change_brackets_ground_state() {
        let s = spec(-1, 2, Sign::Minus, 0);
        let table = build_coefficients(s, 11);
        let a = hankel_det_value(&table, 5, 2, &BigFloat::from_f64(200, -0.44)).unwrap();
        let b = hankel_det_value(&table, 5, 2, &BigFloat::from_f64(200, -0.43)).unwrap();
        assert!(a.is_trusted() && b.is_trusted());
        assert_eq!(a.value.signum_i() * b.value.signum_i(), -1);
    }

    #[test]
    fn short_table_is_rejected() {
        let s = spec(-1, 2, Sign::Minus, 0);
        let table = build_coefficients(s, 6);
        let err = hankel_det_value(&table, 3, 2, &BigFloat::from_f64(64, -0.3)).unwrap_err();
        assert_eq!(err, RpmError::TableTooShort { needed: 7, available: 6 });
    }

    #[test]
    fn f64_and_bigfloat_agree_for_small_dimension() {
        let s = spec(1, 2, Sign::Plus, 0);
        let table = build_coefficients(s, 20);
        let big = HankelEvaluator::new(&table, 6, 2, &BigFloat::zero(300)).unwrap();
        let small = HankelEvaluator::new(&table, 6, 2, &0.0f64).unwrap();
        let x = 1.9;
        let hb = big.det(&BigFloat::from_f64(300, x)).to_f64();
        let hs = small.det(&x);
        assert!(((hb - hs) / hb).abs() < 1e-6, "{hb} vs {hs}");
    }
}
