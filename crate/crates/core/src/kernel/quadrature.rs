//! Double-exponential quadrature on `[0, ∞)` for exponentially decaying
//! integrands.
//!
//! The substitution `t = exp(s - exp(-s)) / rate` maps `s ∈ ℝ` onto
//! `(0, ∞)`. An integrand `f` that is bounded at the origin and decays like
//! `e^{-rate·t}` becomes doubly-exponentially small at both ends, so the
//! trapezoid rule in `s` converges geometrically in the number of nodes.
//! Each level halves the step and reuses all previous nodes.
//!
//! The error estimate is the difference between the last two levels. For
//! this rule that difference bounds the error of the *coarser* level, so it
//! is a conservative (but heuristic, not certified) bound for the returned
//! value.

use super::config::EvalConfig;
use super::real::Real;
use crate::error::{domain, Error, Result};

const MIN_LEVELS: usize = 3;
const MAX_LEVELS: usize = 12;

#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: Real,
    pub error_estimate: Real,
    pub evaluations: usize,
}

/// Truncation point in `s`: beyond ±`s_max` the transformed integrand is
/// below `10^-(digits+10)` relative to its peak.
fn s_max(digits: u32) -> f64 {
    let needed = (f64::from(digits) + 10.0) * std::f64::consts::LN_10;
    needed.ln() + 1.0
}

/// Integrates `f` over `(0, ∞)`. `decay_rate` is the rate `x` in the
/// promised `e^{-x t}` decay; it only sets the scale of the substitution.
pub fn integrate_semi_infinite<F>(f: F, decay_rate: &Real, cfg: &EvalConfig) -> Result<Quadrature>
where
    F: Fn(&Real) -> Real,
{
    if !decay_rate.is_positive() {
        return Err(domain("decay rate must be positive"));
    }
    let d = cfg.digits();
    let rate = decay_rate.to_digits(d);
    let smax = s_max(d);

    // transformed integrand at abscissa s
    let node = |s: &Real| -> Real {
        let em = (-s).exp();
        let t = (s - &em).exp() / &rate;
        let w = &t * &(&em + 1);
        let v = f(&t);
        if v.is_zero() || w.is_zero() {
            cfg.zero()
        } else {
            v * w
        }
    };

    let mut h = cfg.ratio(1, 2);
    let mut evaluations = 0usize;

    // level 0: all integer multiples of h within the window
    let k0 = (smax / 0.5).ceil() as i64;
    let mut sum = cfg.zero();
    for k in -k0..=k0 {
        let s = &h * k;
        sum = sum + node(&s);
        evaluations += 1;
    }
    let mut estimate = &sum * &h;
    let mut last_diff: Option<Real> = None;

    for level in 1..=MAX_LEVELS {
        h = h.mul_pow2(-1);
        let half_span = (smax * f64::from(1u32 << (level + 1))).ceil() as i64;
        let mut odd = cfg.zero();
        let mut k = -half_span;
        if k % 2 == 0 {
            k += 1;
        }
        while k <= half_span {
            let s = &h * k;
            odd = odd + node(&s);
            evaluations += 1;
            k += 2;
        }
        sum = sum + odd;
        let next = &sum * &h;
        let diff = (&next - &estimate).abs();
        estimate = next;
        if level >= MIN_LEVELS && diff <= cfg.quadrature_target_error {
            return Ok(Quadrature {
                value: estimate,
                error_estimate: diff,
                evaluations,
            });
        }
        last_diff = Some(diff);
    }

    Err(Error::NonConvergence(format!(
        "quadrature error estimate {} above target {} after {evaluations} nodes",
        last_diff.map(|d| d.to_decimal_string_with(6)).unwrap_or_default(),
        cfg.quadrature_target_error.to_decimal_string_with(6)
    )))
}
