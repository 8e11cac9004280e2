use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};
use rug::Rational;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator (GMP `mpq_t` canonical form).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigRational(Rational);

impl BigRational {
    /// Builds `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational(Rational::from((num, den)))
    }

    pub fn from_integer(n: i64) -> Self {
        BigRational(Rational::from(n))
    }

    pub fn from_inner(r: Rational) -> Self {
        BigRational(r)
    }

    pub fn as_inner(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    pub fn numer(&self) -> &rug::Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &rug::Integer {
        self.0.denom()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        BigRational(Rational::from(self.0.recip_ref()))
    }

    pub fn abs(&self) -> Self {
        BigRational(Rational::from(self.0.abs_ref()))
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// Nearest `f64`; may overflow to infinity or underflow to zero.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Approximate `log2 |self|` without overflow; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (n, ne) = self.0.numer().to_f64_exp();
        let (d, de) = self.0.denom().to_f64_exp();
        (n.abs() / d).log2() + (f64::from(ne) - f64::from(de))
    }

    /// Exact conversion of a finite binary float.
    pub fn from_float(f: &rug::Float) -> Option<Self> {
        f.to_rational().map(BigRational)
    }

    /// Continued-fraction convergents with denominator at most `max_den`,
    /// in order of increasing denominator.
    pub fn convergents(&self, max_den: &rug::Integer) -> Vec<BigRational> {
        let (mut p, mut q) = (self.0.numer().clone(), self.0.denom().clone());
        let (mut h0, mut h1) = (rug::Integer::from(0), rug::Integer::from(1));
        let (mut k0, mut k1) = (rug::Integer::from(1), rug::Integer::from(0));
        let mut out = Vec::new();
        while q != 0 {
            let (a, r) = p.clone().div_rem_floor(q.clone());
            let h = rug::Integer::from(&a * &h1) + &h0;
            let k = rug::Integer::from(&a * &k1) + &k0;
            if k > *max_den {
                break;
            }
            out.push(BigRational(Rational::from((h.clone(), k.clone()))));
            (h0, h1, k0, k1) = (h1, h, k1, k);
            (p, q) = (q, r);
        }
        out
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Option<Self> {
        Rational::from_f64(v).map(BigRational)
    }
}

impl fmt::Debug for BigRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for BigRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for BigRational {
    type Err = rug::rational::ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rational::from_str(s.trim()).map(BigRational)
    }
}

impl From<i64> for BigRational {
    fn from(n: i64) -> Self {
        BigRational::from_integer(n)
    }
}

impl From<(i64, i64)> for BigRational {
    fn from((n, d): (i64, i64)) -> Self {
        BigRational::new(n, d)
    }
}

impl Zero for BigRational {
    fn zero() -> Self {
        BigRational(Rational::new())
    }

    fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }
}

impl One for BigRational {
    fn one() -> Self {
        BigRational(Rational::from(1))
    }
}

macro_rules! rational_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident, $op:tt) => {
        impl $tr for BigRational {
            type Output = BigRational;
            fn $method(mut self, rhs: BigRational) -> BigRational {
                self.0 $op rhs.0;
                self
            }
        }
        impl<'a> $tr<&'a BigRational> for BigRational {
            type Output = BigRational;
            fn $method(mut self, rhs: &'a BigRational) -> BigRational {
                self.0 $op &rhs.0;
                self
            }
        }
        impl<'a, 'b> $tr<&'b BigRational> for &'a BigRational {
            type Output = BigRational;
            fn $method(self, rhs: &'b BigRational) -> BigRational {
                let mut out = self.clone();
                out.0 $op &rhs.0;
                out
            }
        }
        impl<'a> $assign_tr<&'a BigRational> for BigRational {
            fn $assign(&mut self, rhs: &'a BigRational) {
                self.0 $op &rhs.0;
            }
        }
        impl $assign_tr for BigRational {
            fn $assign(&mut self, rhs: BigRational) {
                self.0 $op rhs.0;
            }
        }
    };
}

rational_binop!(Add, add, AddAssign, add_assign, +=);
rational_binop!(Sub, sub, SubAssign, sub_assign, -=);
rational_binop!(Mul, mul, MulAssign, mul_assign, *=);

impl Div for BigRational {
    type Output = BigRational;
    fn div(mut self, rhs: BigRational) -> BigRational {
        assert!(!rhs.is_zero(), "division by zero");
        self.0 /= rhs.0;
        self
    }
}

impl<'a> Div<&'a BigRational> for BigRational {
    type Output = BigRational;
    fn div(mut self, rhs: &'a BigRational) -> BigRational {
        assert!(!rhs.is_zero(), "division by zero");
        self.0 /= &rhs.0;
        self
    }
}

impl Neg for BigRational {
    type Output = BigRational;
    fn neg(self) -> BigRational {
        BigRational(-self.0)
    }
}

impl Neg for &BigRational {
    type Output = BigRational;
    fn neg(self) -> BigRational {
        BigRational(Rational::from(-&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let r = BigRational::new(6, -4);
        assert_eq!(r.numer().to_i64(), Some(-3));
        assert_eq!(r.denom().to_i64(), Some(2));
    }

    #[test]
    fn convergents_of_a_fraction() {
        let x = BigRational::new(-355, 113);
        let c = x.convergents(&rug::Integer::from(1000));
        assert_eq!(c, vec![BigRational::from(-4), BigRational::new(-3, 1), BigRational::new(-22, 7), x.clone()]);
        assert_eq!(x.convergents(&rug::Integer::from(100)).last(), Some(&BigRational::new(-22, 7)));
    }

    #[test]
    fn arithmetic() {
        let a = BigRational::new(1, 3);
        let b = BigRational::new(2, 3);
        assert_eq!(&a + &b, BigRational::one());
        assert_eq!(a.clone() * b.clone(), BigRational::new(2, 9));
        assert_eq!(b / a, BigRational::from_integer(2));
    }

    #[test]
    fn log2_of_tiny_and_huge() {
        let big = BigRational::from_inner(Rational::from((rug::Integer::from(1) << 5000u32, 3)));
        assert!((big.log2_abs() - (5000.0 - 3f64.log2())).abs() < 1e-9);
        assert_eq!(BigRational::zero().log2_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn parses() {
        assert_eq!("-7/21".parse::<BigRational>().unwrap(), BigRational::new(-1, 3));
    }
}
