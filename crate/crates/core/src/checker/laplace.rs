use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernel::{integrate_semi_infinite, EvalConfig, Real};
use crate::special::{psi_p, PIndex};

/// Both sides of `ln p − ψ_p(x) = ∫₀^∞ (1 − e^{−(p+1)t})/(1 − e^{−t}) e^{−xt} dt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceCheck {
    pub p: PIndex,
    pub x: Real,
    pub series: Real,
    pub integral: Real,
    pub discrepancy: Real,
    pub error_estimate: Real,
}

pub fn laplace_crosscheck_detail(p: PIndex, x: &Real, cfg: &EvalConfig) -> Result<LaplaceCheck> {
    let x = x.to_digits(cfg.digits());
    let ln_p = Real::from_u64(p.get(), cfg.digits()).ln();
    let series = &ln_p - &psi_p(p, &x, cfg)?;
    let p1 = Real::from_u64(p.get() + 1, cfg.digits());
    let kernel = |t: &Real| {
        let num = (-(&p1 * t)).exp_m1();
        let den = (-t).exp_m1();
        num / den * (-(&x * t)).exp()
    };
    let quad = integrate_semi_infinite(kernel, &x, cfg)?;
    let discrepancy = (&series - &quad.value).abs();
    Ok(LaplaceCheck {
        p,
        x: x.clone(),
        series,
        integral: quad.value,
        discrepancy,
        error_estimate: quad.error_estimate,
    })
}

/// `|(ln p − ψ_p(x)) − ∫₀^∞ …|`, the series and integral forms of ψ_p.
pub fn laplace_crosscheck(p: PIndex, x: &Real, cfg: &EvalConfig) -> Result<Real> {
    Ok(laplace_crosscheck_detail(p, x, cfg)?.discrepancy)
}
