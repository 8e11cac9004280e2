use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Round;
use rug::Float;

use super::BigRational;

/// Real scalar used by the numeric kernels (Horner evaluation, Hankel
/// determinants, root refinement).
///
/// Precision travels with each value: constructors take a `like` value and
/// produce a number at the same precision, so there is never a global
/// working precision. `f64` is the fixed 53-bit instance.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    /// Significand precision in bits.
    fn precision(&self) -> u32;

    fn from_f64_like(v: f64, like: &Self) -> Self;

    /// Correctly rounded conversion of an exact rational.
    fn from_rational_like(r: &BigRational, like: &Self) -> Self;

    fn zero_like(like: &Self) -> Self {
        Self::from_f64_like(0.0, like)
    }

    fn one_like(like: &Self) -> Self {
        Self::from_f64_like(1.0, like)
    }

    fn abs(&self) -> Self;

    fn is_zero(&self) -> bool;

    /// -1, 0 or 1. NaN maps to 0.
    fn signum_i(&self) -> i32;

    fn to_f64(&self) -> f64;

    /// `log2 |self|` computed without over/underflow; `-inf` for zero.
    fn log2_abs(&self) -> f64;

    /// `self -= a * b`, fused where the type allows.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self);

    /// `self = self * x + c` (one Horner step).
    fn horner_step(&mut self, x: &Self, c: &Self);

    /// Unit roundoff `2^-precision`.
    fn unit_roundoff(&self) -> f64 {
        (-(self.precision() as f64)).exp2()
    }
}

impl Real for f64 {
    fn precision(&self) -> u32 {
        f64::MANTISSA_DIGITS
    }

    fn from_f64_like(v: f64, _like: &Self) -> Self {
        v
    }

    fn from_rational_like(r: &BigRational, _like: &Self) -> Self {
        r.to_f64()
    }

    fn abs(&self) -> Self {
        num_traits::Float::abs(*self)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn signum_i(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn log2_abs(&self) -> f64 {
        num_traits::Float::log2(num_traits::Float::abs(*self))
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = num_traits::Float::mul_add(-*a, *b, *self);
    }

    fn horner_step(&mut self, x: &Self, c: &Self) {
        *self = num_traits::Float::mul_add(*self, *x, *c);
    }
}

/// Binary floating-point number with an explicit significand precision,
/// backed by MPFR. Every operation is correctly rounded to nearest.
///
/// Binary operators return a value at the larger of the two operand
/// precisions; compound assignments keep the precision of the left side.
#[derive(Clone)]
pub struct BigFloat(Float);

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat(Float::new(prec))
    }

    pub fn from_f64(prec: u32, v: f64) -> Self {
        BigFloat(Float::with_val(prec, v))
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        BigFloat(Float::with_val(prec, v))
    }

    pub fn from_rational(prec: u32, r: &BigRational) -> Self {
        BigFloat(Float::with_val(prec, r.as_inner()))
    }

    pub fn from_inner(f: Float) -> Self {
        BigFloat(f)
    }

    /// Parses a decimal string, rounding to nearest at `prec` bits.
    pub fn parse(prec: u32, s: &str) -> Result<Self, rug::float::ParseFloatError> {
        let inc = Float::parse(s.trim())?;
        Ok(BigFloat(Float::with_val(prec, inc)))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_inner(&self) -> &Float {
        &self.0
    }

    pub fn into_inner(self) -> Float {
        self.0
    }

    /// Same value rounded to a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigFloat(Float::with_val(prec, &self.0))
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// Exact rational value of a finite number.
    pub fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(&self.0)
    }

    /// Number of decimal digits that round-trip at this precision.
    pub fn round_trip_digits(prec: u32) -> usize {
        // ceil(prec * log10(2)) + 1
        (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 1
    }

    /// Decimal representation in plain positional notation with
    /// `digits` significant digits; enough digits round-trip exactly.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return if self.0.is_sign_negative() { "-0".into() } else { "0".into() };
        }
        if !self.0.is_finite() {
            return self.0.to_string();
        }
        let s = self.0.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest);
        scientific_to_positional(&s)
    }

    /// Decimal string with the full round-trip digit count.
    pub fn to_decimal_full(&self) -> String {
        self.to_decimal(Self::round_trip_digits(self.prec()))
    }

    pub fn sqrt(&self) -> Self {
        BigFloat(Float::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn pow_f(&self, e: &BigFloat) -> Self {
        BigFloat(Float::with_val(self.prec(), rug::ops::Pow::pow(&self.0, &e.0)))
    }

    pub fn mul_2exp(&self, e: i32) -> Self {
        let mut out = self.clone();
        out.0 <<= e;
        out
    }
}

/// Rewrites MPFR's `d.ddde±x` output as a positional decimal string.
fn scientific_to_positional(s: &str) -> String {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E', '@']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    // value = 0.digits * 10^(point) where point = len(int_part) + exp
    let point = int_part.len() as i64 + exp;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.to_decimal(40), self.prec())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_decimal(p)),
            None => f.write_str(&self.to_decimal_full()),
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! float_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident, $op:tt) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $tr::$method(self, &rhs)
            }
        }
        impl<'a> $tr<&'a BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(mut self, rhs: &'a BigFloat) -> BigFloat {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                self.0 $op &rhs.0;
                self
            }
        }
        impl<'a, 'b> $tr<&'b BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'b BigFloat) -> BigFloat {
                let prec = self.prec().max(rhs.prec());
                let mut out = BigFloat(Float::with_val(prec, &self.0));
                out.0 $op &rhs.0;
                out
            }
        }
        impl<'a> $assign_tr<&'a BigFloat> for BigFloat {
            fn $assign(&mut self, rhs: &'a BigFloat) {
                self.0 $op &rhs.0;
            }
        }
        impl $assign_tr for BigFloat {
            fn $assign(&mut self, rhs: BigFloat) {
                self.0 $op rhs.0;
            }
        }
    };
}

float_binop!(Add, add, AddAssign, add_assign, +=);
float_binop!(Sub, sub, SubAssign, sub_assign, -=);
float_binop!(Mul, mul, MulAssign, mul_assign, *=);
float_binop!(Div, div, DivAssign, div_assign, /=);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0.clone())
    }
}

impl Real for BigFloat {
    fn precision(&self) -> u32 {
        self.prec()
    }

    fn from_f64_like(v: f64, like: &Self) -> Self {
        BigFloat::from_f64(like.prec(), v)
    }

    fn from_rational_like(r: &BigRational, like: &Self) -> Self {
        BigFloat::from_rational(like.prec(), r)
    }

    fn abs(&self) -> Self {
        BigFloat(Float::with_val(self.prec(), self.0.abs_ref()))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn signum_i(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn log2_abs(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        if !self.0.is_finite() {
            return f64::INFINITY;
        }
        let (m, e) = self.0.to_f64_exp();
        m.abs().log2() + f64::from(e)
    }

    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        self.0 -= &a.0 * &b.0;
    }

    fn horner_step(&mut self, x: &Self, c: &Self) {
        self.0.mul_add_mut(&x.0, &c.0);
    }
}
