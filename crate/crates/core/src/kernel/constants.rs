use super::config::EvalConfig;
use super::real::Real;

/// The Euler–Mascheroni constant at `cfg.precision_digits` digits.
pub fn euler_gamma(cfg: &EvalConfig) -> Real {
    Real::euler_constant(cfg.precision_digits)
}
