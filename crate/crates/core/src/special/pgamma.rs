//! Finite p-analogues of Γ and ψ.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernel::{EvalConfig, Real};

/// Truncation index `p ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PIndex(u64);

impl PIndex {
    pub fn new(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSpec("p must be a positive integer".into()));
        }
        Ok(PIndex(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for PIndex {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PIndex::new(p)
    }
}

impl From<PIndex> for u64 {
    fn from(p: PIndex) -> u64 {
        p.0
    }
}

impl std::fmt::Display for PIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

fn check_x(x: &Real) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(domain(format!("x must be positive, got {x}")))
    }
}

/// `ln Γ_p(x) = x ln p − ln x − Σ_{k=1}^{p} ln(1 + x/k)`.
pub fn ln_gamma_p(p: PIndex, x: &Real, cfg: &EvalConfig) -> Result<Real> {
    check_x(x)?;
    let x = x.to_digits(cfg.digits());
    let pr = Real::from_u64(p.get(), cfg.digits());
    let mut acc = &x * &pr.ln() - x.ln();
    for k in 1..=p.get() {
        acc = acc - (&x / &Real::from_u64(k, cfg.digits())).ln_1p();
    }
    Ok(acc)
}

/// `Γ_p(x) = p! p^x / (x(x+1)⋯(x+p))`, exponentiated from [`ln_gamma_p`].
pub fn gamma_p(p: PIndex, x: &Real, cfg: &EvalConfig) -> Result<Real> {
    Ok(ln_gamma_p(p, x, cfg)?.exp())
}

/// `Σ_{k=0}^{p} (x+k)^{−n−1}` for `n = 0..=order`.
fn power_sums(p: PIndex, x: &Real, order: usize, cfg: &EvalConfig) -> Vec<Real> {
    let x = x.to_digits(cfg.digits());
    let mut sums = vec![cfg.zero(); order + 1];
    for k in 0..=p.get() {
        let inv = (&x + &Real::from_u64(k, cfg.digits())).recip();
        let mut pw = inv.clone();
        for slot in sums.iter_mut() {
            *slot = &*slot + &pw;
            pw = &pw * &inv;
        }
    }
    sums
}

/// `[ψ_p(x), ψ_p'(x), …, ψ_p^{(order)}(x)]` from the finite sum.
pub fn psi_p_tower(p: PIndex, x: &Real, order: usize, cfg: &EvalConfig) -> Result<Vec<Real>> {
    check_x(x)?;
    let sums = power_sums(p, x, order, cfg);
    let ln_p = Real::from_u64(p.get(), cfg.digits()).ln();
    let mut out = Vec::with_capacity(order + 1);
    out.push(&ln_p - &sums[0]);
    let mut factorial = cfg.one();
    for (n, s) in sums.iter().enumerate().skip(1) {
        factorial = factorial * n as i64;
        let v = &factorial * s;
        out.push(if n % 2 == 1 { v } else { -v });
    }
    Ok(out)
}

/// `ψ_p(x) = ln p − Σ_{k=0}^{p} 1/(x+k)`.
pub fn psi_p(p: PIndex, x: &Real, cfg: &EvalConfig) -> Result<Real> {
    Ok(psi_p_tower(p, x, 0, cfg)?.swap_remove(0))
}

/// `ψ_p^{(n)}(x) = (−1)^{n+1} n! Σ_{k=0}^{p} (x+k)^{−n−1}`, `n ≥ 1`.
pub fn psi_p_deriv(p: PIndex, n: usize, x: &Real, cfg: &EvalConfig) -> Result<Real> {
    if n == 0 {
        return Err(domain("derivative order must be at least 1; use psi_p"));
    }
    Ok(psi_p_tower(p, x, n, cfg)?.swap_remove(n))
}
