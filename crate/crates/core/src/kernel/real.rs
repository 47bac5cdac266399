//! Decimal-precision wrapper over an MPFR float.
//!
//! A [`Real`] remembers how many significant decimal digits it is meant to
//! carry. Binary operations produce a result at the larger of the two
//! operand precisions, so a computation seeded at `d` digits stays at `d`
//! digits throughout.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest supported precision, in significant decimal digits.
pub const MIN_DIGITS: u32 = 15;

/// Extra binary digits carried beyond the nominal decimal precision.
const GUARD_BITS: u32 = 16;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Binary precision backing `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32 + GUARD_BITS
}

#[derive(Clone)]
pub struct Real {
    value: Float,
    digits: u32,
}

impl Real {
    fn wrap(value: Float, digits: u32) -> Self {
        Real { value, digits }
    }

    fn clamp(digits: u32) -> u32 {
        digits.max(MIN_DIGITS)
    }

    pub fn zero(digits: u32) -> Self {
        Self::from_i64(0, digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_i64(1, digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), v), d)
    }

    pub fn from_u64(v: u64, digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), v), d)
    }

    /// Exact binary value of `v`, widened to `digits`.
    pub fn from_f64(v: f64, digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), v), d)
    }

    /// Ratio of two integers, correctly rounded.
    pub fn ratio(num: i64, den: i64, digits: u32) -> Self {
        let d = Self::clamp(digits);
        let r = rug::Rational::from((num, den));
        Self::wrap(Float::with_val(bits_for_digits(d), &r), d)
    }

    pub fn from_rational(r: &rug::Rational, digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), r), d)
    }

    pub fn from_float(value: Float, digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), value), d)
    }

    /// Parses a decimal literal such as `0.9999`, `-3`, `1e-5`.
    pub fn parse(s: &str, digits: u32) -> Result<Self> {
        let d = Self::clamp(digits);
        let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?} is not a real number: {e}")))?;
        let value = Float::with_val(bits_for_digits(d), parsed);
        if !value.is_finite() {
            return Err(Error::Parse(format!("{s:?} is not finite")));
        }
        Ok(Self::wrap(value, d))
    }

    pub fn pi(digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), Constant::Pi), d)
    }

    pub fn ln2(digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), Constant::Log2), d)
    }

    pub(crate) fn euler_constant(digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), Constant::Euler), d)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn as_float(&self) -> &Float {
        &self.value
    }

    /// Rounds (or widens) to `digits` decimal digits.
    pub fn to_digits(&self, digits: u32) -> Self {
        let d = Self::clamp(digits);
        Self::wrap(Float::with_val(bits_for_digits(d), &self.value), d)
    }

    /// A value of the same precision as `self`.
    pub fn lift_i64(&self, v: i64) -> Self {
        Self::from_i64(v, self.digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    fn bits(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    fn unary(&self, f: impl FnOnce(&mut Float)) -> Self {
        let mut v = Float::with_val(self.bits(), &self.value);
        f(&mut v);
        Self::wrap(v, self.digits)
    }

    pub fn ln(&self) -> Self {
        self.unary(|v| {
            v.ln_mut();
        })
    }

    pub fn ln_1p(&self) -> Self {
        self.unary(|v| {
            v.ln_1p_mut();
        })
    }

    pub fn exp(&self) -> Self {
        self.unary(|v| {
            v.exp_mut();
        })
    }

    pub fn exp_m1(&self) -> Self {
        self.unary(|v| {
            v.exp_m1_mut();
        })
    }

    pub fn sqrt(&self) -> Self {
        self.unary(|v| {
            v.sqrt_mut();
        })
    }

    pub fn abs(&self) -> Self {
        self.unary(|v| {
            v.abs_mut();
        })
    }

    pub fn recip(&self) -> Self {
        self.unary(|v| {
            v.recip_mut();
        })
    }

    pub fn square(&self) -> Self {
        self.unary(|v| {
            v.square_mut();
        })
    }

    pub fn powi(&self, n: i32) -> Self {
        let v = Float::with_val(self.bits(), (&self.value).pow(n));
        Self::wrap(v, self.digits)
    }

    pub fn powf(&self, e: &Real) -> Self {
        let d = self.digits.max(e.digits);
        let v = Float::with_val(bits_for_digits(d), (&self.value).pow(&e.value));
        Self::wrap(v, d)
    }

    /// Scales by `2^k` exactly.
    pub fn mul_pow2(&self, k: i32) -> Self {
        let v = Float::with_val(self.bits(), &self.value << k);
        Self::wrap(v, self.digits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_sign_positive() && !self.value.is_zero() && !self.value.is_nan()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_sign_negative() && !self.value.is_zero() && !self.value.is_nan()
    }

    /// `-1`, `0` or `1`.
    pub fn signum(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn max<'a>(&'a self, other: &'a Real) -> &'a Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min<'a>(&'a self, other: &'a Real) -> &'a Real {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Unit in the last place at the nominal decimal precision.
    pub fn ulp(&self) -> Real {
        let scale = if self.is_zero() {
            Real::one(self.digits)
        } else {
            self.abs()
        };
        let exp = -(self.digits as i32) + 1;
        &scale * &Real::from_i64(10, self.digits).powi(exp)
    }

    /// Identical binary value and precision.
    pub fn bits_eq(&self, other: &Real) -> bool {
        self.digits == other.digits
            && self.value.prec() == other.value.prec()
            && self.value.to_string_radix(16, None) == other.value.to_string_radix(16, None)
    }

    /// Decimal string with `self.digits()` significant digits.
    pub fn to_decimal_string(&self) -> String {
        self.to_decimal_string_with(self.digits)
    }

    pub fn to_decimal_string_with(&self, digits: u32) -> String {
        self.value.to_string_radix(10, Some(digits as usize))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_decimal_string_with(p.max(1) as u32)),
            None => f.write_str(&self.to_decimal_string()),
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({}; {} digits)", self.to_decimal_string(), self.digits)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let d = self.digits.max(rhs.digits);
                Real::wrap(Float::with_val(bits_for_digits(d), &self.value $op &rhs.value), d)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                &self $op &rhs
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                &self $op rhs
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
        impl $tr<i64> for &Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                let r = Real::from_i64(rhs, self.digits);
                self $op &r
            }
        }
        impl $tr<i64> for Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                &self $op rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(Float::with_val(self.bits(), -&self.value), self.digits)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(mut self) -> Real {
        self.value = -self.value;
        self
    }
}

impl<'a> std::iter::Sum<&'a Real> for Real {
    fn sum<I: Iterator<Item = &'a Real>>(iter: I) -> Real {
        let mut acc: Option<Real> = None;
        for x in iter {
            acc = Some(match acc {
                None => x.clone(),
                Some(a) => &a + x,
            });
        }
        acc.unwrap_or_else(|| Real::zero(MIN_DIGITS))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal_string())
    }
}

/// Number of significant digits written in a decimal literal.
fn literal_digits(s: &str) -> u32 {
    let mantissa = s.split(['e', 'E']).next().unwrap_or("");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = digits.trim_start_matches('0');
    trimmed.len() as u32
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RealVisitor;
        impl Visitor<'_> for RealVisitor {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                Real::parse(v, literal_digits(v)).map_err(E::custom)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                let s = format!("{v}");
                Real::parse(&s, MIN_DIGITS).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real::from_i64(v, MIN_DIGITS))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                Ok(Real::from_u64(v, MIN_DIGITS))
            }
        }
        d.deserialize_any(RealVisitor)
    }
}
