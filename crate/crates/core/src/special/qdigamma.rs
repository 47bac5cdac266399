//! q-digamma for `0 < q < 1` and its derivatives in `x`.
//!
//! Convention:
//!
//! ```text
//! ψ_q(x) = −ln(1−q) + ln q · Σ_{k≥1} q^{kx} / (1 − q^k)
//!        = −ln(1−q) + ln q · Σ_{j≥0} g(x+j),     g(u) = 1/(e^{bu} − 1),  b = −ln q
//! ```
//!
//! Two summation routes share the shift `Σ_{j<J} g^{(m)}(x+j)`:
//!
//! * **direct**: the k-series at `U = x+J`, summed until its geometric tail
//!   bound drops below the working epsilon;
//! * **Euler–Maclaurin**: for `q` close to 1 the k-series needs ~`1/(bU)`
//!   terms, so the tail `Σ_{j≥J} g^{(m)}(x+j)` is instead expanded as
//!   `∫_U^∞ g^{(m)} + g^{(m)}(U)/2 − Σ_i B_{2i}/(2i)! g^{(m+2i−1)}(U)`, with
//!   derivatives of `g` taken from a truncated series of `1/(e^{b(U+h)} − 1)`.

use serde::{Deserialize, Serialize};

use super::bernoulli::{bernoulli_even, MAX_HALF_INDEX};
use crate::error::{domain, Error, Result};
use crate::kernel::{series, EvalConfig, Real};

const GUARD_DIGITS: u32 = 10;
/// Direct route is preferred while it needs at most this many k-terms.
const DIRECT_TERM_TARGET: f64 = 4000.0;
/// Largest upward shift the direct route may use.
const MAX_DIRECT_SHIFT: f64 = 256.0;

/// Base `q` of the q-digamma, strictly inside `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Real", into = "Real")]
pub struct QParam(Real);

impl QParam {
    pub fn new(q: Real) -> Result<Self> {
        if q.is_positive() && q < Real::one(q.digits()) {
            Ok(QParam(q))
        } else {
            Err(domain(format!("q must lie strictly inside (0, 1), got {q}")))
        }
    }

    pub fn get(&self) -> &Real {
        &self.0
    }
}

impl TryFrom<Real> for QParam {
    type Error = Error;
    fn try_from(q: Real) -> Result<Self> {
        QParam::new(q)
    }
}

impl From<QParam> for Real {
    fn from(q: QParam) -> Real {
        q.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Route {
    Direct,
    EulerMaclaurin,
}

/// `ψ_q^{(m)}(x)` for `m ≥ 0`.
pub fn q_digamma_deriv(q: &QParam, m: usize, x: &Real, cfg: &EvalConfig) -> Result<Real> {
    Ok(q_digamma_tower(q, x, m, cfg)?.swap_remove(m))
}

/// `[ψ_q(x), ψ_q'(x), …, ψ_q^{(order)}(x)]`.
pub fn q_digamma_tower(q: &QParam, x: &Real, order: usize, cfg: &EvalConfig) -> Result<Vec<Real>> {
    let route = choose_route(q, x, cfg);
    q_digamma_tower_via(q, x, order, cfg, route)
}

fn choose_route(q: &QParam, x: &Real, cfg: &EvalConfig) -> Route {
    let b = -q.get().ln().to_f64();
    let budget = digits_budget(cfg.digits() + GUARD_DIGITS);
    let needed_u = budget / (DIRECT_TERM_TARGET * b);
    if needed_u - x.to_f64() <= MAX_DIRECT_SHIFT {
        Route::Direct
    } else {
        Route::EulerMaclaurin
    }
}

/// `ln(10^(digits+5))`
fn digits_budget(digits: u32) -> f64 {
    (f64::from(digits) + 5.0) * std::f64::consts::LN_10
}

pub(crate) fn q_digamma_tower_via(
    q: &QParam,
    x: &Real,
    order: usize,
    cfg: &EvalConfig,
    route: Route,
) -> Result<Vec<Real>> {
    if !x.is_positive() {
        return Err(domain(format!("q-digamma needs x > 0, got {x}")));
    }
    if order > cfg.max_polygamma_order {
        return Err(Error::OrderTooLarge {
            order,
            max: cfg.max_polygamma_order,
        });
    }
    let work = cfg.elevated(cfg.digits() + GUARD_DIGITS);
    let d = work.digits();
    let x = x.to_digits(d);
    let qv = q.get().to_digits(d);
    let ln_q = qv.ln();
    let b = -&ln_q;
    let bf = b.to_f64();

    let shift = match route {
        Route::Direct => {
            let needed_u = digits_budget(d) / (DIRECT_TERM_TARGET * bf);
            (needed_u - x.to_f64()).ceil().max(0.0) as usize
        }
        Route::EulerMaclaurin => {
            let target = f64::from(2 * d) + order as f64;
            (target - x.to_f64()).ceil().max(0.0) as usize
        }
    };

    // Σ_{j<J} g^{(m)}(x+j)
    let mut sums = vec![work.zero(); order + 1];
    for j in 0..shift {
        let u = &x + j as i64;
        let g = g_series(&b, &u, order + 1);
        let mut fact = work.one();
        for (m, slot) in sums.iter_mut().enumerate() {
            if m > 0 {
                fact = fact * m as i64;
            }
            *slot = &*slot + &(&g[m] * &fact);
        }
    }

    let u = &x + shift as i64;
    let tail = match route {
        Route::Direct => direct_tail(&b, &u, order, &work)?,
        Route::EulerMaclaurin => em_tail(&b, &u, order, &work)?,
    };

    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut v = &ln_q * &(&sums[m] + &tail[m]);
        if m == 0 {
            v = v - (-&qv).ln_1p();
        }
        out.push(v.to_digits(cfg.digits()));
    }
    Ok(out)
}

/// Taylor coefficients of `g(u+h) = 1/(e^{b(u+h)} − 1)` in `h`, `len` terms.
fn g_series(b: &Real, u: &Real, len: usize) -> Vec<Real> {
    let bu = b * u;
    let ebu = bu.exp();
    let mut den = Vec::with_capacity(len);
    den.push(bu.exp_m1());
    let mut c = ebu;
    for k in 1..len {
        c = &c * b / k as i64;
        den.push(c.clone());
    }
    series::recip(&den)
}

/// `T_m = Σ_{k≥1} (−bk)^m e^{−bkU} / (1 − e^{−bk})` for `m = 0..=order`.
fn direct_tail(b: &Real, u: &Real, order: usize, cfg: &EvalConfig) -> Result<Vec<Real>> {
    let eps = cfg.epsilon();
    let ratio = (-(b * u)).exp(); // e^{−bU}
    let mut geometric = ratio.clone();
    let mut sums = vec![cfg.zero(); order + 1];
    for k in 1..=cfg.max_series_terms {
        let bk = b * k as i64;
        let base = &geometric / &(-(-&bk).exp_m1());
        let mut term = base;
        let mut done = true;
        // tail after k is bounded by term_k(m)·ρ/(1−ρ),
        // ρ = ((k+1)/k)^order · e^{−bU}
        let growth = Real::ratio(k as i64 + 1, k as i64, cfg.digits()).powi(order as i32);
        let rho = &growth * &ratio;
        let rho_ok = rho < cfg.one();
        let factor = if rho_ok { &rho / &(cfg.one() - &rho) } else { cfg.zero() };
        for (m, slot) in sums.iter_mut().enumerate() {
            if m > 0 {
                term = -(&term * &bk);
            }
            *slot = &*slot + &term;
            if !rho_ok || &term.abs() * &factor > &eps * &slot.abs() {
                done = false;
            }
        }
        if done {
            return Ok(sums);
        }
        geometric = &geometric * &ratio;
    }
    Err(Error::NonConvergence(format!(
        "q-series tail not below epsilon after {} terms",
        cfg.max_series_terms
    )))
}

/// Euler–Maclaurin tail `Σ_{j≥0} g^{(m)}(U+j)` for `m = 0..=order`.
fn em_tail(b: &Real, u: &Real, order: usize, cfg: &EvalConfig) -> Result<Vec<Real>> {
    let eps = cfg.epsilon();
    let max_i = ((cfg.digits() as usize) / 2 + order / 2 + 10).min(MAX_HALF_INDEX);
    let len = order + 2 * max_i + 1;
    let coeffs = g_series(b, u, len);
    // derivatives g^{(k)}(U) = k!·coeffs[k]
    let mut derivs = Vec::with_capacity(len);
    let mut fact = cfg.one();
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            fact = fact * k as i64;
        }
        derivs.push(c * &fact);
    }
    let d = cfg.digits();
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let integral = if m == 0 {
            // ∫_U^∞ g = −ln(1 − e^{−bU}) / b
            -(-(-(b * u)).exp_m1()).ln() / b
        } else {
            -derivs[m - 1].clone()
        };
        let mut acc = integral + &derivs[m] / 2;
        let mut fact2i = Real::one(d);
        let mut converged = false;
        for i in 1..=max_i {
            fact2i = fact2i * ((2 * i - 1) * 2 * i) as i64;
            let coef = Real::from_rational(bernoulli_even(i), d) / &fact2i;
            let term = &coef * &derivs[m + 2 * i - 1];
            let small = term.abs() <= &eps * &acc.abs();
            acc = acc - term;
            if small {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(format!(
                "Euler–Maclaurin tail for q-digamma order {m} did not converge"
            )));
        }
        out.push(acc);
    }
    Ok(out)
}
