use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::functions::FunctionSpec;
use crate::kernel::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `(−1)^n f^{(n)} ≥ 0` for `n ≥ 0`
    Cm,
    /// `(−1)^n (ln f)^{(n)} ≥ 0` for `n ≥ 1`
    Lcm,
}

impl Mode {
    pub fn first_order(self) -> usize {
        match self {
            Mode::Cm => 0,
            Mode::Lcm => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Cm => "cm",
            Mode::Lcm => "lcm",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cm" => Ok(Mode::Cm),
            "lcm" => Ok(Mode::Lcm),
            other => Err(crate::Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// A signed derivative below `−sign_tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub t: Real,
    pub order: usize,
    pub value: Real,
}

/// Signed derivatives `(−1)^n D^n(t)` for `n = first_order..=max_order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub t: Real,
    pub signed: Vec<Real>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub t: Real,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMReport {
    pub function: FunctionSpec,
    pub mode: Mode,
    pub grid: GridSpec,
    pub max_order: usize,
    pub precision_digits: u32,
    pub sign_tolerance: Real,
    /// Smallest signed value over all evaluated points and orders; `None`
    /// when no point evaluated.
    pub min_margin: Option<Real>,
    pub violations: Vec<Violation>,
    pub strict: bool,
    pub samples: Vec<PointSample>,
    pub failures: Vec<PointFailure>,
}

impl CMReport {
    pub fn first_order(&self) -> usize {
        self.mode.first_order()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.failures.is_empty()
    }
}
