use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Real;

/// Inset applied to open-interval endpoints such as 0 and 1.
pub const DEFAULT_INSET: f64 = 0.005;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Uniform,
    Logarithmic,
}

impl std::str::FromStr for Spacing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "lin" | "linear" => Ok(Spacing::Uniform),
            "log" | "logarithmic" => Ok(Spacing::Logarithmic),
            other => Err(Error::Parse(format!("unknown spacing {other:?}"))),
        }
    }
}

/// Points `lo = t_0 < t_1 < … < t_{count−1} = hi`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: Real,
    pub hi: Real,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(lo: Real, hi: Real, count: usize, spacing: Spacing) -> Result<Self> {
        let g = GridSpec { lo, hi, count, spacing };
        g.validate()?;
        Ok(g)
    }

    /// Grid over the open interval `(lo, hi)`, pulled in by `inset` at both
    /// ends.
    pub fn open(lo: &Real, hi: &Real, count: usize, spacing: Spacing, inset: &Real) -> Result<Self> {
        GridSpec::new(lo + inset, hi - inset, count, spacing)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lo.is_positive() {
            return Err(Error::InvalidSpec(format!("grid must start above 0, got {}", self.lo)));
        }
        if self.lo >= self.hi {
            return Err(Error::InvalidSpec(format!(
                "grid bounds out of order: {} ≥ {}",
                self.lo, self.hi
            )));
        }
        if self.count < 2 {
            return Err(Error::InvalidSpec("grid needs at least 2 points".into()));
        }
        Ok(())
    }

    /// Grid points at `digits` precision; the endpoints are exact.
    pub fn points(&self, digits: u32) -> Vec<Real> {
        let lo = self.lo.to_digits(digits);
        let hi = self.hi.to_digits(digits);
        let last = (self.count - 1) as i64;
        let mut pts = Vec::with_capacity(self.count);
        match self.spacing {
            Spacing::Uniform => {
                let step = (&hi - &lo) / last;
                for i in 0..last {
                    pts.push(&lo + &(&step * i));
                }
            }
            Spacing::Logarithmic => {
                let ln_lo = lo.ln();
                let step = (hi.ln() - &ln_lo) / last;
                for i in 0..last {
                    pts.push((&ln_lo + &(&step * i)).exp());
                }
                if let Some(first) = pts.first_mut() {
                    *first = lo.clone();
                }
            }
        }
        pts.push(hi);
        pts
    }
}
