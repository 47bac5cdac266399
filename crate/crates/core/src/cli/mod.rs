//! Command-line front end.
//!
//! Exit codes: 0 when a check finds nothing, 1 when it finds a violation,
//! 2 for usage, parse and domain errors.

mod report;
mod sweep;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use report::{Format, LaplaceRow, ReportBody, ReportDocument, TOOL_NAME};
pub use sweep::{run_sweep, FamilyGrid, ParamGrid, SweepRow, SweepSpec, Verdict};

use crate::checker::{check, laplace_crosscheck_detail, GridSpec, Mode, Spacing};
use crate::error::{Error, Result};
use crate::functions::{FunctionSpec, ThetaFamily};
use crate::jet::Expr;
use crate::kernel::{EvalConfig, Real, DEFAULT_DIGITS};
use crate::special::{PIndex, QParam};

pub const PRECISION_ENV: &str = "CM_LAB_PRECISION";
const FIXED_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cm-lab", version, about = "High-precision complete-monotonicity lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the n-th derivative of a function at a point.
    Eval(EvalArgs),
    /// Check CM or LCM sign conditions on a grid.
    Check(CheckArgs),
    /// Run a q-analogue family sweep described by a TOML file.
    Sweep(SweepArgs),
    /// Compare the series and integral forms of ψ_p over a p/x grid.
    LaplaceCheck(LaplaceArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PrecisionArgs {
    /// Working precision in decimal digits.
    #[arg(long, env = PRECISION_ENV)]
    pub digits: Option<u32>,
}

impl PrecisionArgs {
    fn config(&self) -> Result<EvalConfig> {
        EvalConfig::new(self.digits.unwrap_or(DEFAULT_DIGITS))
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Report file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    pub format: String,
    /// Pin the report timestamp so repeated runs are byte-identical.
    #[arg(long)]
    pub seedless: bool,
}

#[derive(Args, Debug, Clone)]
pub struct FunctionArgs {
    /// theta-alpha, f, g, h, log-q, q, log-qp, qp, psi, psi-p, psi-q,
    /// open-problem-exponent or open-problem-q
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<String>,
    /// θ family for the open-problem functions.
    #[arg(long, default_value = "identity")]
    pub theta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[command(flatten)]
    pub precision: PrecisionArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value = "cm")]
    pub mode: String,
    #[arg(long, default_value = "0.005")]
    pub lo: String,
    #[arg(long, default_value = "0.995")]
    pub hi: String,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value = "log")]
    pub spacing: String,
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    /// Override the sign tolerance.
    #[arg(long)]
    pub tolerance: Option<String>,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Sweep specification (TOML).
    pub spec: PathBuf,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LaplaceArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 5, 50])]
    pub p: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values = ["0.1", "1", "2.5"])]
    pub x: Vec<String>,
    /// Largest discrepancy counted as agreement; default 1e-30.
    #[arg(long)]
    pub threshold: Option<String>,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_CLEAN };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cm-lab: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Eval(a) => cmd_eval(&a),
        Command::Check(a) => cmd_check(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::LaplaceCheck(a) => cmd_laplace(&a),
    }
}

fn timestamp(seedless: bool) -> String {
    if seedless {
        return FIXED_TIMESTAMP.to_string();
    }
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    now.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn emit(doc: &ReportDocument, out: &OutputArgs) -> Result<()> {
    let format: Format = out.format.parse()?;
    let text = doc.render(format)?;
    match &out.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_real(what: &str, s: &str, digits: u32) -> Result<Real> {
    Real::parse(s, digits).map_err(|_| Error::Parse(format!("--{what}: not a number: {s:?}")))
}

fn required<'a>(what: &str, v: &'a Option<String>, function: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::Parse(format!("--fn {function} needs --{what}")))
}

fn p_index(a: &FunctionArgs) -> Result<PIndex> {
    let p =
        a.p.ok_or_else(|| Error::Parse(format!("--fn {} needs --p", a.function)))?;
    PIndex::new(p)
}

fn q_param(a: &FunctionArgs, digits: u32) -> Result<QParam> {
    let s = required("q", &a.q, &a.function)?;
    QParam::new(parse_real("q", s, digits)?)
}

fn theta_family(a: &FunctionArgs, digits: u32) -> Result<ThetaFamily> {
    let get = |name: &str, v: &Option<String>, default: i64| match v {
        Some(s) => parse_real(name, s, digits),
        None => Ok(Real::from_i64(default, digits)),
    };
    Ok(match a.theta.as_str() {
        "identity" => ThetaFamily::Identity,
        "q_bracket" | "q-bracket" => ThetaFamily::QBracket,
        "affine" => ThetaFamily::Affine {
            a: get("a", &a.a, 1)?,
            b: get("b", &a.b, 0)?,
        },
        "rational" => ThetaFamily::Rational {
            a: get("a", &a.a, 1)?,
            b: get("b", &a.b, 0)?,
            c: get("c", &a.c, 0)?,
            d: get("d", &a.d, 1)?,
        },
        other => return Err(Error::Parse(format!("unknown θ family {other:?}"))),
    })
}

/// Builds the function named by `--fn` and its parameter flags.
pub fn function_spec(a: &FunctionArgs, digits: u32) -> Result<FunctionSpec> {
    let name = a.function.as_str();
    let spec = match name {
        "theta-alpha" => FunctionSpec::ThetaAlpha {
            alpha: parse_real("alpha", required("alpha", &a.alpha, name)?, digits)?,
        },
        "f" => FunctionSpec::F,
        "g" => FunctionSpec::G,
        "h" => FunctionSpec::H,
        "log-q" => FunctionSpec::LogQ,
        "q" => FunctionSpec::Q,
        "log-qp" => FunctionSpec::LogQp { p: p_index(a)? },
        "qp" => FunctionSpec::Qp { p: p_index(a)? },
        "psi" => FunctionSpec::Custom {
            label: "psi".into(),
            expr: Expr::var().psi(),
        },
        "psi-p" => {
            let p = p_index(a)?;
            FunctionSpec::Custom {
                label: format!("psi_p(p={p})"),
                expr: Expr::var().psi_p(p),
            }
        }
        "psi-q" => {
            let q = q_param(a, digits)?;
            FunctionSpec::Custom {
                label: format!("psi_q(q={})", q.get().to_decimal_string()),
                expr: Expr::var().psi_q(q),
            }
        }
        "open-problem-exponent" => FunctionSpec::OpenProblemExponent {
            q: q_param(a, digits)?,
            theta: theta_family(a, digits)?,
        },
        "open-problem-q" => FunctionSpec::OpenProblemQ {
            q: q_param(a, digits)?,
            theta: theta_family(a, digits)?,
        },
        other => return Err(Error::Parse(format!("unknown function {other:?}"))),
    };
    spec.validate()?;
    Ok(spec)
}

fn function_input(a: &FunctionArgs, input: &mut BTreeMap<String, String>) {
    input.insert("fn".into(), a.function.clone());
    let optional = [
        ("alpha", a.alpha.clone()),
        ("p", a.p.map(|p| p.to_string())),
        ("q", a.q.clone()),
        ("a", a.a.clone()),
        ("b", a.b.clone()),
        ("c", a.c.clone()),
        ("d", a.d.clone()),
    ];
    for (k, v) in optional {
        if let Some(v) = v {
            input.insert(k.into(), v);
        }
    }
    if a.function.starts_with("open-problem") {
        input.insert("theta".into(), a.theta.clone());
    }
}

fn plain(v: &Real) -> String {
    if v.is_zero() {
        "0".to_string()
    } else {
        v.to_decimal_string()
    }
}

pub fn cmd_eval(a: &EvalArgs) -> Result<i32> {
    let mut cfg = a.precision.config()?;
    let spec = function_spec(&a.function, cfg.digits())?;
    let t = parse_real("t", &a.t, cfg.digits())?;
    cfg = cfg.clone().with_max_order(cfg.max_order.max(a.n));
    let expr = spec.build()?;
    let value = crate::jet::derivative(&expr, a.n, &t, &cfg)?;
    println!("{}", plain(&value));
    Ok(EXIT_CLEAN)
}

pub fn cmd_check(a: &CheckArgs) -> Result<i32> {
    let mut cfg = a.precision.config()?;
    if let Some(tol) = &a.tolerance {
        cfg = cfg
            .clone()
            .with_sign_tolerance(parse_real("tolerance", tol, cfg.digits())?);
    }
    let d = cfg.digits();
    let spec = function_spec(&a.function, d)?;
    let mode: Mode = a.mode.parse()?;
    let spacing: Spacing = a.spacing.parse()?;
    let grid = GridSpec::new(
        parse_real("lo", &a.lo, d)?,
        parse_real("hi", &a.hi, d)?,
        a.points,
        spacing,
    )?;
    let format: Format = a.output.format.parse()?;

    let mut input = BTreeMap::new();
    function_input(&a.function, &mut input);
    for (k, v) in [
        ("mode", mode.as_str().to_string()),
        ("lo", a.lo.clone()),
        ("hi", a.hi.clone()),
        ("points", a.points.to_string()),
        ("spacing", a.spacing.clone()),
        ("order", a.order.to_string()),
        ("digits", d.to_string()),
        ("format", format!("{format:?}").to_lowercase()),
    ] {
        input.insert(k.to_string(), v);
    }
    if let Some(tol) = &a.tolerance {
        input.insert("tolerance".into(), tol.clone());
    }

    let (report, failed) = match check(&spec, mode, &grid, a.order, &cfg) {
        Ok(r) => (r, false),
        Err(Error::ReportsPartial(r)) => (*r, true),
        Err(e) => return Err(e),
    };
    eprintln!(
        "{} {}: {} points, {} violations, {} failures, min margin {}",
        report.function.label(),
        mode.as_str(),
        report.samples.len(),
        report.violations.len(),
        report.failures.len(),
        report
            .min_margin
            .as_ref()
            .map(|m| m.to_decimal_string_with(10))
            .unwrap_or_else(|| "n/a".into())
    );
    if let Some(v) = report.violations.first() {
        eprintln!(
            "first violation: t={} order={} value={}",
            v.t.to_decimal_string_with(15),
            v.order,
            v.value.to_decimal_string_with(15)
        );
    }
    let code = if failed {
        EXIT_ERROR
    } else if report.violations.is_empty() {
        EXIT_CLEAN
    } else {
        EXIT_VIOLATION
    };
    let doc = ReportDocument::new(
        timestamp(a.output.seedless),
        input,
        ReportBody::Check {
            report: Box::new(report),
        },
    );
    emit(&doc, &a.output)?;
    Ok(code)
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let src =
        std::fs::read_to_string(&a.spec).map_err(|e| Error::Parse(format!("cannot read {}: {e}", a.spec.display())))?;
    let spec = SweepSpec::from_toml(&src)?;
    a.output.format.parse::<Format>()?;
    let digits = match (a.precision.digits, spec.digits) {
        (Some(d), _) => d,
        (None, Some(d)) => d,
        (None, None) => DEFAULT_DIGITS,
    };
    let cfg = EvalConfig::new(digits)?;
    let rows = run_sweep(&spec, &cfg)?;
    let violations = rows.iter().filter(|r| r.verdict == Verdict::Violation).count();
    let errors = rows.iter().filter(|r| r.verdict == Verdict::Error).count();
    eprintln!(
        "{} rows, {violations} with violations, {errors} with errors",
        rows.len()
    );

    let mut input = BTreeMap::new();
    input.insert("spec".to_string(), src);
    input.insert("digits".to_string(), digits.to_string());
    let doc = ReportDocument::new(timestamp(a.output.seedless), input, ReportBody::Sweep { rows });
    emit(&doc, &a.output)?;
    Ok(EXIT_CLEAN)
}

pub fn cmd_laplace(a: &LaplaceArgs) -> Result<i32> {
    let cfg = a.precision.config()?;
    let d = cfg.digits();
    let threshold = match &a.threshold {
        Some(s) => parse_real("threshold", s, d)?,
        None => Real::parse("1e-30", d)?,
    };
    let ps = a.p.iter().map(|&p| PIndex::new(p)).collect::<Result<Vec<_>>>()?;
    let xs = a.x.iter().map(|x| parse_real("x", x, d)).collect::<Result<Vec<_>>>()?;
    a.output.format.parse::<Format>()?;
    let mut rows = Vec::new();
    for &p in &ps {
        for x in &xs {
            let check = laplace_crosscheck_detail(p, x, &cfg)?;
            let within_contract = check.discrepancy < threshold;
            rows.push(LaplaceRow { check, within_contract });
        }
    }
    let outside = rows.iter().filter(|r| !r.within_contract).count();
    eprintln!("{} pairs, {outside} above threshold", rows.len());

    let mut input = BTreeMap::new();
    let join = |v: Vec<String>| v.join(",");
    input.insert("p".to_string(), join(a.p.iter().map(|p| p.to_string()).collect()));
    input.insert("x".to_string(), join(a.x.clone()));
    input.insert("digits".to_string(), d.to_string());
    input.insert("threshold".to_string(), threshold.to_decimal_string_with(5));
    let doc = ReportDocument::new(timestamp(a.output.seedless), input, ReportBody::Laplace { rows });
    emit(&doc, &a.output)?;
    Ok(if outside == 0 { EXIT_CLEAN } else { EXIT_VIOLATION })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fargs(name: &str) -> FunctionArgs {
        FunctionArgs {
            function: name.into(),
            alpha: None,
            p: None,
            q: None,
            theta: "identity".into(),
            a: None,
            b: None,
            c: None,
            d: None,
        }
    }

    #[test]
    fn function_names() {
        for name in ["f", "g", "h", "log-q", "q", "psi"] {
            assert!(function_spec(&fargs(name), 30).is_ok(), "{name}");
        }
        assert!(function_spec(&fargs("theta-alpha"), 30).is_err());
        assert!(function_spec(&fargs("log-qp"), 30).is_err());
        assert!(function_spec(&fargs("psi-q"), 30).is_err());
        assert!(function_spec(&fargs("zeta"), 30).is_err());

        let mut a = fargs("psi-q");
        a.q = Some("1.5".into());
        assert!(matches!(function_spec(&a, 30), Err(Error::Domain(_))));
        a.q = Some("0.5".into());
        assert!(function_spec(&a, 30).is_ok());
    }

    #[test]
    fn theta_flags() {
        let mut a = fargs("open-problem-q");
        a.q = Some("0.5".into());
        a.theta = "affine".into();
        a.a = Some("2".into());
        match function_spec(&a, 30).unwrap() {
            FunctionSpec::OpenProblemQ {
                theta: ThetaFamily::Affine { a, b },
                ..
            } => {
                assert_eq!(a, Real::from_i64(2, 30));
                assert!(b.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn seedless_timestamp() {
        assert_eq!(timestamp(true), FIXED_TIMESTAMP);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["cm-lab", "bogus"]), EXIT_ERROR);
        assert_eq!(run(["cm-lab", "eval", "--fn", "f"]), EXIT_ERROR);
        assert_eq!(run(["cm-lab", "eval", "--fn", "f", "--t", "-1"]), EXIT_ERROR);
        assert_eq!(run(["cm-lab", "--help"]), EXIT_CLEAN);
    }
}
