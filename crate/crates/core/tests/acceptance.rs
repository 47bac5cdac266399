//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use cm_lab::checker::{check_cm, check_lcm, find_violation, laplace_crosscheck, GridSpec, Mode, Spacing, Violation};
use cm_lab::functions::{decomposition_residual, FunctionSpec};
use cm_lab::jet::derivative;
use cm_lab::kernel::bits_for_digits;
use cm_lab::special::{digamma, gamma_p, polygamma, psi_p, PIndex};
use cm_lab::{EvalConfig, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn cfg(digits: u32) -> EvalConfig {
    EvalConfig::new(digits).unwrap()
}

fn r(s: &str, digits: u32) -> Real {
    Real::parse(s, digits).unwrap()
}

fn p(v: u64) -> PIndex {
    PIndex::new(v).unwrap()
}

fn log_grid(lo: &str, hi: &str, count: usize, digits: u32) -> GridSpec {
    GridSpec::new(r(lo, digits), r(hi, digits), count, Spacing::Logarithmic).unwrap()
}

fn sci(v: &Real) -> String {
    v.to_decimal_string_with(6)
}

fn strict_lcm(spec: &FunctionSpec, grid: &GridSpec, order: usize, c: &EvalConfig) -> Outcome {
    let rep = check_lcm(spec, grid, order, c).map_err(|e| e.to_string())?;
    let min = rep.min_margin.clone().ok_or("no points evaluated")?;
    ensure!(
        rep.violations.is_empty(),
        "{}: {} violations",
        spec.label(),
        rep.violations.len()
    );
    ensure!(rep.strict, "{}: not strict, min margin {}", spec.label(), sci(&min));
    Ok(format!("{} min margin {}", spec.label(), sci(&min)))
}

fn c1_q_strict_lcm() -> Outcome {
    let c = cfg(50);
    let start = Instant::now();
    let out = strict_lcm(&FunctionSpec::Q, &log_grid("0.005", "0.995", 200, 50), 12, &c)?;
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1} s");
    Ok(format!("{out}, {secs:.2} s"))
}

fn c2_qp_strict_lcm() -> Outcome {
    let c = cfg(50);
    let grid = log_grid("0.005", "0.995", 200, 50);
    let mut parts = Vec::new();
    for pv in [1, 5, 50] {
        parts.push(strict_lcm(&FunctionSpec::Qp { p: p(pv) }, &grid, 12, &c)?);
    }
    Ok(parts.join("; "))
}

fn c3_q_lcm_beyond_one() -> Outcome {
    let c = cfg(50);
    let rep = check_lcm(&FunctionSpec::Q, &log_grid("1", "100", 200, 50), 10, &c).map_err(|e| e.to_string())?;
    ensure!(rep.violations.is_empty(), "{} violations", rep.violations.len());
    let min = rep.min_margin.ok_or("no points evaluated")?;
    ensure!(min.is_positive(), "min margin {}", sci(&min));
    Ok(format!("evidence only: min margin {}", sci(&min)))
}

/// `θ_α(t) = t^α (ln t − ψ(t))` from MPFR's digamma.
fn theta_oracle(alpha: &Float, t: &Float) -> Float {
    let prec = t.prec();
    let psi = Float::with_val(prec, t.digamma_ref());
    let ln = Float::with_val(prec, t.ln_ref());
    Float::with_val(prec, t.pow(alpha)) * (ln - psi)
}

/// `−θ_α'(t)` by a central difference at 60 digits.
fn theta_slope_oracle(alpha: &str, t: &Real) -> Float {
    let prec = bits_for_digits(60);
    let alpha = Float::with_val(prec, Float::parse(alpha).unwrap());
    let t = Float::with_val(prec, t.as_float());
    let h = Float::with_val(prec, Float::parse("1e-20").unwrap());
    let fp = theta_oracle(&alpha, &Float::with_val(prec, &t + &h));
    let fm = theta_oracle(&alpha, &Float::with_val(prec, &t - &h));
    -(fp - fm) / (h * 2u32)
}

fn certified_witness(alpha: &str, lo: &str, hi: &str, order: usize) -> Result<Violation, String> {
    let c = cfg(50);
    let spec = FunctionSpec::ThetaAlpha { alpha: r(alpha, 50) };
    let found = find_violation(&spec, Mode::Cm, (&r(lo, 50), &r(hi, 50)), order, &c)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("θ_{alpha}: no violation found"))?;
    ensure!(found.order == 1, "θ_{alpha}: witness at order {}", found.order);
    let oracle = theta_slope_oracle(alpha, &found.t);
    ensure!(oracle < 0, "θ_{alpha}: oracle does not confirm at t={}", found.t);
    let rel = Float::with_val(oracle.prec(), found.value.as_float() - &oracle).abs() / oracle.clone().abs();
    ensure!(rel < 1e-15, "θ_{alpha}: witness value off oracle by {rel}");
    Ok(found)
}

fn c4_theta_alpha_boundary() -> Outcome {
    let c = cfg(50);
    let one = FunctionSpec::ThetaAlpha { alpha: r("1", 50) };
    let rep = check_cm(&one, &log_grid("0.01", "50", 200, 50), 8, &c).map_err(|e| e.to_string())?;
    ensure!(rep.violations.is_empty(), "θ_1: {} violations", rep.violations.len());
    let w15 = certified_witness("1.5", "0.1", "100", 6)?;
    let w2 = certified_witness("2", "1", "50", 4)?;
    Ok(format!(
        "θ_1 clean to order 8; θ_1.5 witness t={} n={} value {}; θ_2 witness t={} n={} value {}",
        w15.t.to_decimal_string_with(8),
        w15.order,
        sci(&w15.value),
        w2.t.to_decimal_string_with(8),
        w2.order,
        sci(&w2.value)
    ))
}

fn c5_laplace() -> Outcome {
    let c = cfg(50);
    let bound = r("1e-30", 50);
    let mut worst = Real::zero(50);
    for pv in [1, 5, 50] {
        for x in ["0.1", "1", "2.5"] {
            let d = laplace_crosscheck(p(pv), &r(x, 50), &c).map_err(|e| e.to_string())?;
            ensure!(d < bound, "p={pv} x={x}: discrepancy {}", sci(&d));
            worst = worst.max(&d).clone();
        }
    }
    Ok(format!("worst discrepancy {}", sci(&worst)))
}

fn c6_limit() -> Outcome {
    let c = cfg(50);
    let ts: Vec<Real> = ["0.1", "0.5", "0.9"].iter().map(|t| r(t, 50)).collect();
    let log_q = FunctionSpec::LogQ.build().unwrap();
    let mut gaps = Vec::new();
    for pv in [10, 100, 1000] {
        let log_qp = FunctionSpec::LogQp { p: p(pv) }.build().unwrap();
        let mut gap = Real::zero(50);
        for t in &ts {
            let d = (log_qp.value(t, &c).unwrap() - log_q.value(t, &c).unwrap()).abs();
            gap = gap.max(&d).clone();
        }
        gaps.push(gap);
    }
    ensure!(
        gaps[0] > gaps[1] && gaps[1] > gaps[2],
        "gaps not decreasing: {:?}",
        gaps.iter().map(sci).collect::<Vec<_>>()
    );
    Ok(format!(
        "max gaps {}",
        gaps.iter().map(sci).collect::<Vec<_>>().join(" > ")
    ))
}

fn c7_identities() -> Outcome {
    let c = cfg(50);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bound = r("1e-40", 50);
    let mut worst = Real::zero(50);
    for _ in 0..50 {
        let t = Real::from_f64(rng.gen_range(0.001..0.999), 50);
        let res = decomposition_residual(&t, &c).map_err(|e| e.to_string())?;
        ensure!(res < bound, "residual {} at t={}", sci(&res), t);
        worst = worst.max(&res).clone();
    }

    let order = 5;
    let leibniz_tol = r("1e-40", 50);
    let linear_tol = r("1e-45", 50);
    let floor = r("1e-10", 50);
    for i in 0..100 {
        let a = common::any_expr(&mut rng, 2);
        let b = common::any_expr(&mut rng, 2);
        let t0 = Real::from_f64(rng.gen_range(0.5..2.0), 50);
        let ja = a.jet(&t0, order, &c).map_err(|e| e.to_string())?.derivatives();
        let jb = b.jet(&t0, order, &c).map_err(|e| e.to_string())?.derivatives();
        let prod = (a.clone() * b.clone())
            .jet(&t0, order, &c)
            .map_err(|e| e.to_string())?
            .derivatives();
        let sum = (a.clone() + b.clone())
            .jet(&t0, order, &c)
            .map_err(|e| e.to_string())?
            .derivatives();
        for n in 0..=order {
            let mut rhs = Real::zero(50);
            let mut scale = Real::zero(50);
            for k in 0..=n {
                let term = common::binomial(n, k, 50) * &ja[k] * &jb[n - k];
                scale = scale + term.abs();
                rhs = rhs + term;
            }
            ensure!(
                (&prod[n] - &rhs).abs() <= &leibniz_tol * scale.max(&floor),
                "Leibniz fails for expression pair {i} at n={n}: {a} and {b}"
            );
            let lin = &ja[n] + &jb[n];
            let lscale = ja[n].abs() + jb[n].abs();
            ensure!(
                (&sum[n] - &lin).abs() <= &linear_tol * lscale.max(&floor),
                "linearity fails for expression pair {i} at n={n}: {a} and {b}"
            );
        }
    }
    Ok(format!(
        "worst residual {}; 100 expression pairs to order {order}",
        sci(&worst)
    ))
}

/// MPFR-only evaluations of the functions compared in criterion 8.
fn fd_oracle(name: &str, t: &Float) -> Float {
    let prec = t.prec();
    let ln = Float::with_val(prec, t.ln_ref());
    let gamma = Float::with_val(prec, Constant::Euler);
    match name {
        "log_q" => {
            let psi = Float::with_val(prec, t.digamma_ref());
            let f = Float::with_val(prec, t * &(ln.clone() - psi));
            -(f * &ln) - gamma * &ln
        }
        "log_qp5" => {
            // ψ_5(t) = ln 5 − Σ_{k=0}^{5} 1/(t+k)
            let mut psi5 = Float::with_val(prec, 5u32).ln();
            for k in 0..=5u32 {
                psi5 -= Float::with_val(prec, t + k).recip();
            }
            let frac = Float::with_val(prec, t * 5u32) / Float::with_val(prec, t + 6u32);
            let f = Float::with_val(prec, t * &(frac.ln() - psi5));
            -(f * &ln) - gamma * &ln
        }
        "theta_1" => {
            let one = Float::with_val(prec, 1u32);
            theta_oracle(&one, t)
        }
        _ => unreachable!(),
    }
}

/// Central difference of order `n` with step `10^(−30/(n+2))` at 30 digits.
fn central_difference(name: &str, n: usize, t: &Real) -> Float {
    let prec = bits_for_digits(30);
    let t = Float::with_val(prec, t.as_float());
    if n == 0 {
        return fd_oracle(name, &t);
    }
    let h = Float::with_val(prec, 10u32).pow(Float::with_val(prec, -30.0 / (n as f64 + 2.0)));
    let mut acc = Float::with_val(prec, 0u32);
    for k in 0..=n {
        let offset = Float::with_val(prec, n as f64 / 2.0 - k as f64) * &h;
        let v = fd_oracle(name, &Float::with_val(prec, &t + &offset));
        let c = common::binomial(n, k, 30);
        let term = Float::with_val(prec, c.as_float() * &v);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / h.pow(n as u32)
}

fn c8_finite_differences() -> Outcome {
    let c = cfg(30);
    let cases = [
        ("log_q", FunctionSpec::LogQ),
        ("log_qp5", FunctionSpec::LogQp { p: p(5) }),
        ("theta_1", FunctionSpec::ThetaAlpha { alpha: r("1", 30) }),
    ];
    let mut worst = 0.0f64;
    for (name, spec) in &cases {
        let e = spec.build().unwrap();
        for t in ["0.3", "0.7", "2.0"] {
            let t = r(t, 30);
            for n in 0..=5 {
                let jet = derivative(&e, n, &t, &c).map_err(|e| e.to_string())?;
                let fd = central_difference(name, n, &t);
                let rel = (Float::with_val(fd.prec(), jet.as_float() - &fd).abs() / fd.clone().abs()).to_f64();
                ensure!(rel < 1e-6, "{name} n={n} t={}: relative error {rel:e}", t.to_f64());
                worst = worst.max(rel);
            }
        }
    }
    Ok(format!("worst relative error {worst:.3e}"))
}

/// `γ = lim (H_n − ln n)` by Richardson extrapolation over `n = 1000·2^j`.
fn gamma_oracle(prec: u32) -> Float {
    let levels = 11;
    let mut h = Float::with_val(prec, 0u32);
    let mut k: u32 = 0;
    let mut table: Vec<Float> = Vec::new();
    for j in 0..levels {
        let n = 1000u32 << j;
        while k < n {
            k += 1;
            h += Float::with_val(prec, k).recip();
        }
        table.push(Float::with_val(prec, &h - Float::with_val(prec, n).ln()));
    }
    // errors expand in powers of 1/n
    for m in 1..levels {
        let f = Float::with_val(prec, 2u32).pow(m as u32);
        let denom = Float::with_val(prec, &f - 1u32);
        for j in (m..levels).rev() {
            let v = (Float::with_val(prec, &f * &table[j]) - &table[j - 1]) / &denom;
            table[j] = v;
        }
    }
    table.pop().unwrap()
}

/// `ζ(s) = Σ_{k≤N} k^(−s)` plus the Euler–Maclaurin tail at `N`.
fn zeta_oracle(s: u32, prec: u32) -> Float {
    let n = 1000u32;
    let mut sum = Float::with_val(prec, 0u32);
    for k in 1..=n {
        sum += Float::with_val(prec, k).pow(s).recip();
    }
    let nf = Float::with_val(prec, n);
    // ∫_N^∞ k^(−s) dk − N^(−s)/2
    sum += Float::with_val(prec, nf.clone().pow(1 - s as i32)) / (s - 1);
    sum -= Float::with_val(prec, nf.clone().pow(-(s as i32))) / 2u32;
    // − Σ B_2j/(2j)! f^(2j−1)(N), f^(m)(N) = (−1)^m s(s+1)…(s+m−1) N^(−s−m)
    let bernoulli = [(1i64, 6i64), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730)];
    let mut fact = Float::with_val(prec, 1u32);
    for (j, (bn, bd)) in bernoulli.iter().enumerate() {
        let m = 2 * j as u32 + 1;
        fact *= m * (m + 1);
        let mut rising = Float::with_val(prec, 1u32);
        for i in 0..m {
            rising *= s + i;
        }
        let deriv = -(rising * Float::with_val(prec, nf.clone().pow(-((s + m) as i32))));
        let b = Float::with_val(prec, *bn) / *bd;
        sum -= b * deriv / &fact;
    }
    sum
}

fn rel_digits(got: &Real, want: &Float) -> f64 {
    let diff = Float::with_val(want.prec(), got.as_float() - want).abs();
    if diff == 0 {
        return f64::INFINITY;
    }
    -(diff / want.clone().abs()).log10().to_f64()
}

fn c9_golden_values() -> Outcome {
    let c = cfg(50);
    let prec = bits_for_digits(50);
    let one = c.one();
    let gamma = gamma_oracle(prec);
    let zeta2 = zeta_oracle(2, prec);
    let zeta3 = zeta_oracle(3, prec);
    let pi2_6 = Float::with_val(prec, Constant::Pi).square() / 6u32;
    ensure!(
        rel_digits(&Real::from_float(zeta2.clone(), 50), &pi2_6) > 30.0,
        "ζ(2) oracle disagrees with π²/6"
    );
    let checks = [
        ("ψ(1) = −γ", digamma(&one, &c).unwrap(), -gamma),
        ("ψ'(1) = ζ(2)", polygamma(1, &one, &c).unwrap(), zeta2),
        ("ψ''(1) = −2ζ(3)", polygamma(2, &one, &c).unwrap(), -(zeta3 * 2u32)),
        (
            "ψ_1(1) = −1.5",
            psi_p(p(1), &one, &c).unwrap(),
            Float::with_val(prec, -1.5),
        ),
    ];
    let mut least = f64::INFINITY;
    for (name, got, want) in &checks {
        let dg = rel_digits(got, want);
        ensure!(dg >= 30.0, "{name}: only {dg:.1} digits");
        least = least.min(dg);
    }
    for pv in 1..=10u64 {
        let got = gamma_p(p(pv), &one, &c).unwrap();
        let want = Float::with_val(prec, pv) / (pv + 1);
        let dg = rel_digits(&got, &want);
        ensure!(dg >= 30.0, "Γ_{pv}(1): only {dg:.1} digits");
        least = least.min(dg);
    }
    Ok(format!(
        "at least {} matching digits",
        if least.is_finite() {
            format!("{least:.1}")
        } else {
            "50".into()
        }
    ))
}

fn c10_cli_contract() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases: [(&[&str], i32); 3] = [
        (
            &[
                "check", "--fn", "q", "--mode", "lcm", "--lo", "0.005", "--hi", "0.995", "--points", "200", "--order",
                "12",
            ],
            0,
        ),
        (
            &[
                "check",
                "--fn",
                "theta-alpha",
                "--alpha",
                "2",
                "--mode",
                "cm",
                "--lo",
                "1",
                "--hi",
                "50",
                "--order",
                "4",
            ],
            1,
        ),
        (
            &[
                "check", "--fn", "q", "--mode", "lcm", "--lo", "1", "--hi", "100", "--order", "10",
            ],
            0,
        ),
    ];
    let mut codes = Vec::new();
    for (i, (args, want)) in cases.iter().enumerate() {
        let mut reports = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("case{i}-{run}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_cm-lab"))
                .args(*args)
                .arg("--seedless")
                .arg("--out")
                .arg(&path)
                .env_remove("CM_LAB_PRECISION")
                .output()
                .map_err(|e| e.to_string())?
                .status;
            let code = status.code().ok_or("terminated by signal")?;
            ensure!(code == *want, "case {i}: exit {code}, expected {want}");
            reports.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure!(reports[0] == reports[1], "case {i}: reports differ between runs");
        codes.push(want.to_string());
    }
    Ok(format!("exit codes {}, byte-identical reprises", codes.join("/")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Q is strictly LCM on (0, 1)", c1_q_strict_lcm),
        ("Q_p is strictly LCM on (0, 1) for p = 1, 5, 50", c2_qp_strict_lcm),
        ("Q is LCM on (1, 100)", c3_q_lcm_beyond_one),
        ("θ_α is CM exactly for α ≤ 1", c4_theta_alpha_boundary),
        ("series and integral forms of ψ_p agree", c5_laplace),
        ("log q_p → log q as p grows", c6_limit),
        ("decomposition, Leibniz and linearity identities", c7_identities),
        ("jet derivatives match finite differences", c8_finite_differences),
        ("special-function golden values", c9_golden_values),
        ("CLI exit codes and reproducibility", c10_cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2} s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2} s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
