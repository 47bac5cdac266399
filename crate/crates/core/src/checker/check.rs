use rayon::prelude::*;

use super::grid::{GridSpec, Spacing};
use super::report::{CMReport, Mode, PointFailure, PointSample, Violation};
use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::jet::Expr;
use crate::kernel::{EvalConfig, Real, JET_ORDER_CAP};

/// Points in each pass of [`find_violation`].
const SEARCH_POINTS: usize = 48;
const SEARCH_DEPTH: usize = 6;
/// Candidates re-evaluated at doubled precision per pass.
const CERTIFY_ATTEMPTS: usize = 8;

/// What gets differentiated at each point.
struct Target {
    expr: Expr,
    /// The expression is `f` itself and `ln` must be applied to its jet.
    take_ln: bool,
}

fn target(spec: &FunctionSpec, mode: Mode) -> Result<Target> {
    Ok(match mode {
        Mode::Cm => Target {
            expr: spec.build()?,
            take_ln: false,
        },
        Mode::Lcm => match spec.log_form()? {
            Some(expr) => Target { expr, take_ln: false },
            None => Target {
                expr: spec.build()?,
                take_ln: true,
            },
        },
    })
}

fn prepare(mode: Mode, max_order: usize, cfg: &EvalConfig) -> Result<EvalConfig> {
    cfg.validate()?;
    if max_order > JET_ORDER_CAP {
        return Err(Error::OrderTooLarge {
            order: max_order,
            max: JET_ORDER_CAP,
        });
    }
    if mode == Mode::Lcm && max_order == 0 {
        return Err(Error::InvalidSpec("an LCM check needs max_order ≥ 1".into()));
    }
    Ok(cfg.clone().with_max_order(cfg.max_order.max(max_order)))
}

/// `(−1)^n D^n` at `t` for `n = mode.first_order()..=max_order`.
fn signed_values(target: &Target, mode: Mode, t: &Real, max_order: usize, cfg: &EvalConfig) -> Result<Vec<Real>> {
    let mut jet = target.expr.jet(t, max_order, cfg)?;
    if target.take_ln {
        if !jet.value().is_positive() {
            return Err(Error::NonPositiveFunction {
                t: t.to_decimal_string_with(20),
            });
        }
        jet = jet.ln()?;
    }
    Ok(jet
        .derivatives()
        .into_iter()
        .enumerate()
        .skip(mode.first_order())
        .map(|(n, v)| if n % 2 == 0 { v } else { -v })
        .collect())
}

fn run_check(spec: &FunctionSpec, mode: Mode, grid: &GridSpec, max_order: usize, cfg: &EvalConfig) -> Result<CMReport> {
    let cfg = prepare(mode, max_order, cfg)?;
    grid.validate()?;
    let target = target(spec, mode)?;
    let points = grid.points(cfg.digits());

    let results: Vec<Result<Vec<Real>>> = points
        .par_iter()
        .map(|t| signed_values(&target, mode, t, max_order, &cfg))
        .collect();

    let tol = cfg.sign_tolerance.clone();
    let neg_tol = -&tol;
    let first = mode.first_order();
    let mut samples = Vec::new();
    let mut failures = Vec::new();
    let mut violations = Vec::new();
    let mut min_margin: Option<Real> = None;
    for (t, res) in points.into_iter().zip(results) {
        match res {
            Ok(signed) => {
                for (i, v) in signed.iter().enumerate() {
                    if min_margin.as_ref().is_none_or(|m| v < m) {
                        min_margin = Some(v.clone());
                    }
                    if *v < neg_tol {
                        violations.push(Violation {
                            t: t.clone(),
                            order: first + i,
                            value: v.clone(),
                        });
                    }
                }
                samples.push(PointSample { t, signed });
            }
            Err(e @ Error::NonPositiveFunction { .. }) => return Err(e),
            Err(e) => failures.push(PointFailure {
                t,
                message: e.to_string(),
            }),
        }
    }

    let strict = min_margin.as_ref().is_some_and(|m| *m > tol);
    let report = CMReport {
        function: spec.clone(),
        mode,
        grid: grid.clone(),
        max_order,
        precision_digits: cfg.digits(),
        sign_tolerance: tol,
        min_margin,
        violations,
        strict,
        samples,
        failures,
    };
    if report.failures.is_empty() {
        Ok(report)
    } else {
        Err(Error::ReportsPartial(Box::new(report)))
    }
}

/// Complete-monotonicity check: `(−1)^n f^{(n)}(t)` for `n = 0..=max_order`
/// at every grid point.
pub fn check_cm(spec: &FunctionSpec, grid: &GridSpec, max_order: usize, cfg: &EvalConfig) -> Result<CMReport> {
    run_check(spec, Mode::Cm, grid, max_order, cfg)
}

/// Logarithmic complete-monotonicity check: `(−1)^n (ln f)^{(n)}(t)` for
/// `n = 1..=max_order`. Uses the spec's closed log form when it has one.
pub fn check_lcm(spec: &FunctionSpec, grid: &GridSpec, max_order: usize, cfg: &EvalConfig) -> Result<CMReport> {
    run_check(spec, Mode::Lcm, grid, max_order, cfg)
}

pub fn check(spec: &FunctionSpec, mode: Mode, grid: &GridSpec, max_order: usize, cfg: &EvalConfig) -> Result<CMReport> {
    run_check(spec, mode, grid, max_order, cfg)
}

/// Re-evaluates one signed derivative at doubled precision.
fn certify(spec: &FunctionSpec, mode: Mode, t: &Real, order: usize, cfg: &EvalConfig) -> Result<Option<Violation>> {
    let hi = cfg.elevated(cfg.digits() * 2).with_max_order(cfg.max_order.max(order));
    let target = target(spec, mode)?;
    let signed = signed_values(&target, mode, &t.to_digits(hi.digits()), order, &hi)?;
    let v = signed.last().expect("at least one order").clone();
    if v < -&hi.sign_tolerance {
        Ok(Some(Violation {
            t: t.clone(),
            order,
            value: v,
        }))
    } else {
        Ok(None)
    }
}

/// Searches `(lo, hi)` for a sign violation of the lowest failing order: a
/// coarse grid pass, then repeated refinement around the most negative
/// signed value of that order. A candidate is returned only if
/// re-evaluation at doubled precision confirms it.
pub fn find_violation(
    spec: &FunctionSpec,
    mode: Mode,
    interval: (&Real, &Real),
    max_order: usize,
    cfg: &EvalConfig,
) -> Result<Option<Violation>> {
    let cfg = prepare(mode, max_order, cfg)?;
    let (mut lo, mut hi) = (interval.0.clone(), interval.1.clone());
    let wide = (&hi / &lo).to_f64() >= 10.0;
    let mut spacing = if wide { Spacing::Logarithmic } else { Spacing::Uniform };
    let neg_tol = -&cfg.sign_tolerance;
    let first = mode.first_order();

    for _ in 0..SEARCH_DEPTH {
        let grid = GridSpec::new(lo.clone(), hi.clone(), SEARCH_POINTS, spacing)?;
        let report = run_check(spec, mode, &grid, max_order, &cfg)?;

        // (point index, order, value), lowest order first, then most negative
        let mut entries: Vec<(usize, usize, &Real)> = report
            .samples
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.signed.iter().enumerate().map(move |(k, v)| (i, first + k, v)))
            .collect();
        entries.sort_by(|a, b| {
            let neg_a = *a.2 < neg_tol;
            let neg_b = *b.2 < neg_tol;
            neg_b
                .cmp(&neg_a)
                .then(a.1.cmp(&b.1))
                .then(a.2.partial_cmp(b.2).expect("finite values"))
                .then(a.0.cmp(&b.0))
        });

        for &(i, n, v) in entries.iter().take(CERTIFY_ATTEMPTS) {
            if *v >= neg_tol {
                break;
            }
            if let Some(found) = certify(spec, mode, &report.samples[i].t, n, &cfg)? {
                return Ok(Some(found));
            }
        }

        let Some(&(i, _, _)) = entries.first() else {
            return Ok(None);
        };
        let pts: Vec<&Real> = report.samples.iter().map(|s| &s.t).collect();
        let new_lo = pts[i.saturating_sub(1)].clone();
        let new_hi = pts[(i + 1).min(pts.len() - 1)].clone();
        if new_lo >= new_hi {
            break;
        }
        lo = new_lo;
        hi = new_hi;
        spacing = Spacing::Uniform;
    }
    Ok(None)
}
