use serde::{Deserialize, Serialize};

use super::real::{Real, MIN_DIGITS};
use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 50;
pub const DEFAULT_MAX_ORDER: usize = 16;
/// Jets are never built past this order.
pub const JET_ORDER_CAP: usize = 64;
pub const DEFAULT_MAX_POLYGAMMA_ORDER: usize = 64;
pub const DEFAULT_MAX_SERIES_TERMS: usize = 200_000;

/// Evaluation settings shared by every numerical routine.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvalConfig {
    pub precision_digits: u32,
    /// Values in `[-sign_tolerance, sign_tolerance]` count as zero.
    pub sign_tolerance: Real,
    pub max_series_terms: usize,
    pub quadrature_target_error: Real,
    pub max_order: usize,
    pub max_polygamma_order: usize,
}

fn pow10(exp: i32, digits: u32) -> Real {
    Real::from_i64(10, digits).powi(exp)
}

impl EvalConfig {
    /// Defaults at `digits` decimal digits.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidConfig(format!(
                "precision must be at least {MIN_DIGITS} digits, got {digits}"
            )));
        }
        let d = digits as i32;
        Ok(EvalConfig {
            precision_digits: digits,
            sign_tolerance: pow10(-d / 2, digits),
            max_series_terms: DEFAULT_MAX_SERIES_TERMS,
            quadrature_target_error: pow10(-d + 10, digits),
            max_order: DEFAULT_MAX_ORDER,
            max_polygamma_order: DEFAULT_MAX_POLYGAMMA_ORDER,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_digits < MIN_DIGITS {
            return Err(Error::InvalidConfig(format!(
                "precision must be at least {MIN_DIGITS} digits"
            )));
        }
        if self.sign_tolerance.is_negative() || self.sign_tolerance >= Real::one(MIN_DIGITS) {
            return Err(Error::InvalidConfig("sign tolerance must lie in [0, 1)".into()));
        }
        let cap = pow10(-(self.precision_digits as i32) + 10, self.precision_digits);
        if !self.quadrature_target_error.is_positive() || self.quadrature_target_error > cap {
            return Err(Error::InvalidConfig(format!(
                "quadrature target must lie in (0, 1e{}]",
                -(self.precision_digits as i32) + 10
            )));
        }
        if self.max_series_terms == 0 {
            return Err(Error::InvalidConfig("max_series_terms must be positive".into()));
        }
        if self.max_order > JET_ORDER_CAP {
            return Err(Error::InvalidConfig(format!(
                "max_order {} exceeds the hard cap {JET_ORDER_CAP}",
                self.max_order
            )));
        }
        Ok(())
    }

    pub fn digits(&self) -> u32 {
        self.precision_digits
    }

    pub fn with_sign_tolerance(mut self, tol: Real) -> Self {
        self.sign_tolerance = tol.to_digits(self.precision_digits);
        self
    }

    pub fn with_max_order(mut self, n: usize) -> Self {
        self.max_order = n;
        self
    }

    pub fn with_max_series_terms(mut self, n: usize) -> Self {
        self.max_series_terms = n;
        self
    }

    /// Same settings at a higher precision. The sign tolerance is kept so a
    /// value certified at the new precision is judged by the same rule.
    pub fn elevated(&self, digits: u32) -> Self {
        let mut c =
            EvalConfig::new(digits.max(self.precision_digits)).expect("elevated precision is above the minimum");
        c.sign_tolerance = self.sign_tolerance.to_digits(c.precision_digits);
        c.max_series_terms = self.max_series_terms;
        c.max_order = self.max_order;
        c.max_polygamma_order = self.max_polygamma_order;
        c
    }

    pub fn real(&self, v: f64) -> Real {
        Real::from_f64(v, self.precision_digits)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(v, self.precision_digits)
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Real::ratio(num, den, self.precision_digits)
    }

    pub fn parse(&self, s: &str) -> Result<Real> {
        Real::parse(s, self.precision_digits)
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.precision_digits)
    }

    pub fn one(&self) -> Real {
        Real::one(self.precision_digits)
    }

    /// Relative accuracy target for series truncation: `2^-bits`.
    pub(crate) fn epsilon(&self) -> Real {
        let bits = super::real::bits_for_digits(self.precision_digits) as i32;
        self.one().mul_pow2(-bits)
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig::new(DEFAULT_DIGITS).expect("default precision is valid")
    }
}
