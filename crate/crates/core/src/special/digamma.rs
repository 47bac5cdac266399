//! ψ and its derivatives by upward recurrence and the Bernoulli asymptotic
//! expansion.
//!
//! For `y` large,
//!
//! ```text
//! ψ(y)      ~ ln y − 1/(2y) − Σ_{i≥1} B_{2i} / (2i · y^{2i})
//! ψ^{(n)}(y) ~ (−1)^{n+1} [ (n−1)!/y^n + n!/(2 y^{n+1})
//!                           + Σ_{i≥1} B_{2i} (2i+n−1)! / ((2i)! · y^{2i+n}) ]
//! ```
//!
//! and the remainder is bounded by the first omitted term. Small arguments
//! are shifted with `ψ^{(n)}(x) = ψ^{(n)}(x+m) − (−1)^n n! Σ_{j<m} (x+j)^{−n−1}`.

use super::bernoulli::{bernoulli_even, MAX_HALF_INDEX};
use crate::error::{domain, Error, Result};
use crate::kernel::{EvalConfig, Real};

/// Guard digits used internally before rounding back to the caller's
/// precision.
const GUARD_DIGITS: u32 = 10;

/// Shift threshold: arguments below this are moved up by the recurrence.
fn default_threshold(digits: u32, order: usize) -> f64 {
    (20.0 * f64::from(digits) / 15.0).max(10.0) + order as f64
}

/// `[ψ(x), ψ'(x), …, ψ^{(order)}(x)]`.
pub fn digamma_tower(x: &Real, order: usize, cfg: &EvalConfig) -> Result<Vec<Real>> {
    if !x.is_positive() {
        return Err(domain(format!("digamma needs x > 0, got {x}")));
    }
    if order > cfg.max_polygamma_order {
        return Err(Error::OrderTooLarge {
            order,
            max: cfg.max_polygamma_order,
        });
    }
    let work = cfg.elevated(cfg.digits() + GUARD_DIGITS);
    let xw = x.to_digits(work.digits());
    let mut threshold = default_threshold(work.digits(), order);
    loop {
        if let Some(tower) = tower_with_threshold(&xw, order, threshold, &work) {
            return Ok(tower.into_iter().map(|v| v.to_digits(cfg.digits())).collect());
        }
        threshold *= 2.0;
        if threshold > 1e6 {
            return Err(Error::NonConvergence(format!(
                "asymptotic expansion of polygamma order {order} did not converge"
            )));
        }
    }
}

/// `None` when the asymptotic series runs out of terms before converging.
fn tower_with_threshold(x: &Real, order: usize, threshold: f64, cfg: &EvalConfig) -> Option<Vec<Real>> {
    let d = cfg.digits();
    let xf = x.to_f64();
    let shifts = if xf < threshold {
        (threshold - xf).ceil() as usize
    } else {
        0
    };

    // shift sums S_n = Σ_{j<m} (x+j)^{−n−1}
    let mut shift_sums = vec![Real::zero(d); order + 1];
    for j in 0..shifts {
        let inv = (x + j as i64).recip();
        let mut p = inv.clone();
        for slot in shift_sums.iter_mut() {
            *slot = &*slot + &p;
            p = &p * &inv;
        }
    }

    let y = x + shifts as i64;
    let inv_y = y.recip();
    let inv_y2 = inv_y.square();
    let eps = cfg.epsilon();

    let mut tower = Vec::with_capacity(order + 1);
    let mut factorial = Real::one(d); // n!
    for (n, shift_sum) in shift_sums.iter().enumerate() {
        if n > 0 {
            factorial = factorial * n as i64;
        }
        // leading part and the Bernoulli sum in the bracketed form
        let (lead, mut inv_pow) = if n == 0 {
            (&y.ln() - &(&inv_y / 2), inv_y2.clone())
        } else {
            // (n−1)!/y^n + n!/(2 y^{n+1})
            let inv_yn = inv_y.powi(n as i32);
            let lead = &(&factorial / n as i64) * &inv_yn + &(&factorial * &(&inv_yn * &inv_y)) / 2;
            (lead, &inv_yn * &inv_y2)
        };
        // ratio (2i+n−1)!/(2i)! built incrementally; for n = 0 it is 1/(2i)
        let mut sum = Real::zero(d);
        let mut converged = false;
        let mut prev_mag: Option<Real> = None;
        let mut rising = Real::one(d); // (2i+n−1)!/(2i)! for n ≥ 1
        for i in 1..=MAX_HALF_INDEX {
            let b = Real::from_rational(bernoulli_even(i), d);
            let coef = if n == 0 {
                b / (2 * i as i64)
            } else {
                // update rising = (2i+n−1)!/(2i)! from i−1
                if i == 1 {
                    // (n+1)!/2!
                    rising = &factorial * (n as i64 + 1) / 2;
                } else {
                    let a = (2 * i + n - 2) as i64;
                    let c = (2 * i + n - 1) as i64;
                    rising = rising * a * c / ((2 * i - 1) as i64 * (2 * i) as i64);
                }
                &b * &rising
            };
            let term = &coef * &inv_pow;
            let mag = term.abs();
            let scale = (&lead + &sum).abs();
            sum = sum + &term;
            if mag <= &eps * &scale {
                converged = true;
                break;
            }
            if let Some(pm) = &prev_mag {
                if &mag > pm {
                    return None;
                }
            }
            prev_mag = Some(mag);
            inv_pow = &inv_pow * &inv_y2;
        }
        if !converged {
            return None;
        }
        let at_y = if n == 0 {
            &lead - &sum
        } else if n % 2 == 1 {
            &lead + &sum
        } else {
            -(&lead + &sum)
        };
        // ψ^{(n)}(x) = ψ^{(n)}(y) − (−1)^n n! S_n
        let shift = &factorial * shift_sum;
        let value = if n % 2 == 0 { &at_y - &shift } else { &at_y + &shift };
        tower.push(value);
    }
    Some(tower)
}

pub fn digamma(x: &Real, cfg: &EvalConfig) -> Result<Real> {
    Ok(digamma_tower(x, 0, cfg)?.swap_remove(0))
}

/// `ψ^{(n)}(x)` for `n ≥ 1`.
pub fn polygamma(n: usize, x: &Real, cfg: &EvalConfig) -> Result<Real> {
    if n == 0 {
        return Err(domain("polygamma order must be at least 1; use digamma"));
    }
    let mut t = digamma_tower(x, n, cfg)?;
    Ok(t.swap_remove(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::euler_gamma;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn assert_close(a: &Real, b: &Real, tol: &str) {
        let t = Real::parse(tol, 60).unwrap();
        assert!((a - b).abs() < t, "{a} vs {b}");
    }

    #[test]
    fn psi_one_is_minus_gamma() {
        let c = cfg();
        assert_close(&digamma(&c.one(), &c).unwrap(), &-euler_gamma(&c), "1e-48");
    }

    #[test]
    fn psi_two() {
        let c = cfg();
        let want = c.one() - euler_gamma(&c);
        assert_close(&digamma(&c.int(2), &c).unwrap(), &want, "1e-48");
    }

    #[test]
    fn psi_half() {
        // −γ − 2 ln 2
        let c = cfg();
        let want = -euler_gamma(&c) - Real::ln2(50) * 2;
        assert_close(&digamma(&c.ratio(1, 2), &c).unwrap(), &want, "1e-48");
        assert!((digamma(&c.ratio(1, 2), &c).unwrap().to_f64() + 1.9635100260214235).abs() < 1e-15);
    }

    #[test]
    fn trigamma_recurrence() {
        let c = cfg();
        let a = polygamma(1, &c.int(2), &c).unwrap();
        let b = polygamma(1, &c.one(), &c).unwrap() - c.one();
        assert_close(&a, &b, "1e-48");
    }

    #[test]
    fn large_argument_no_shift() {
        let c = cfg();
        let x = c.int(1000);
        let a = digamma(&x, &c).unwrap();
        let b = digamma(&(&x + 1), &c).unwrap() - x.recip();
        assert_close(&a, &b, "1e-46");
    }

    #[test]
    fn rejects_nonpositive() {
        let c = cfg();
        assert!(matches!(digamma(&c.zero(), &c), Err(Error::Domain(_))));
        assert!(matches!(polygamma(2, &c.int(-1), &c), Err(Error::Domain(_))));
    }

    #[test]
    fn order_limit() {
        let c = cfg();
        assert!(matches!(
            polygamma(65, &c.one(), &c),
            Err(Error::OrderTooLarge { order: 65, max: 64 })
        ));
        assert!(polygamma(64, &c.one(), &c).unwrap().is_negative());
    }

    #[test]
    fn tower_signs() {
        let c = cfg();
        let t = digamma_tower(&c.ratio(3, 10), 16, &c).unwrap();
        for (n, v) in t.iter().enumerate().skip(1) {
            assert_eq!(v.signum(), if n % 2 == 1 { 1 } else { -1 }, "order {n}");
        }
    }
}
