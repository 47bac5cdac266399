//! Sweep specification files and the sweep driver.
//!
//! A sweep file is TOML:
//!
//! ```toml
//! q_values = [0.5, "0.9999"]
//! interval = [0.05, 0.95]
//! max_order = 8
//! points = 50             # optional, default 200
//! spacing = "uniform"     # optional, default "log"
//! digits = 40             # optional, default from flags / environment
//!
//! [[families]]
//! family = "identity"
//!
//! [[families]]
//! family = "affine"
//! a = { lo = 0.5, hi = 1.5, steps = 3 }
//! b = 0
//! ```
//!
//! Numbers may be given as TOML numbers or as decimal strings; strings keep
//! every digit. A parameter is either a fixed number or a `{ lo, hi, steps }`
//! grid. Omitted parameters take the values that reduce the family to
//! `θ(t) = t`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::checker::{check_lcm, GridSpec, Spacing, Violation};
use crate::error::{Error, Result};
use crate::functions::{FunctionSpec, ThetaFamily};
use crate::kernel::{EvalConfig, Real};
use crate::special::QParam;

/// Digits used to hold sweep-file literals before the working precision is
/// known.
const LITERAL_DIGITS: u32 = 200;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Literal {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Literal {
    fn to_real(&self, digits: u32) -> Result<Real> {
        match self {
            Literal::Int(v) => Ok(Real::from_i64(*v, digits)),
            // shortest round-trip form, so 0.1 means one tenth
            Literal::Float(v) => Real::parse(&format!("{v}"), digits),
            Literal::Text(s) => Real::parse(s.trim(), digits),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ParamValue {
    Range { lo: Literal, hi: Literal, steps: usize },
    Fixed(Literal),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    q_values: Vec<Literal>,
    interval: (Literal, Literal),
    max_order: usize,
    points: Option<usize>,
    spacing: Option<String>,
    digits: Option<u32>,
    families: Vec<BTreeMap<String, toml::Value>>,
}

/// Values one family parameter takes across the sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamGrid {
    pub name: String,
    pub values: Vec<Real>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyGrid {
    pub family: String,
    pub params: Vec<ParamGrid>,
}

impl FamilyGrid {
    /// Every parameter tuple, last parameter varying fastest.
    pub fn members(&self) -> Result<Vec<ThetaFamily>> {
        let mut tuples: Vec<Vec<Real>> = vec![vec![]];
        for p in &self.params {
            tuples = tuples
                .into_iter()
                .flat_map(|prefix| {
                    p.values.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v.clone());
                        next
                    })
                })
                .collect();
        }
        tuples.into_iter().map(|vals| self.instantiate(vals)).collect()
    }

    fn instantiate(&self, vals: Vec<Real>) -> Result<ThetaFamily> {
        let mut it = vals.into_iter();
        let mut next = || it.next().expect("one value per parameter");
        Ok(match self.family.as_str() {
            "identity" => ThetaFamily::Identity,
            "q_bracket" => ThetaFamily::QBracket,
            "affine" => ThetaFamily::Affine { a: next(), b: next() },
            "rational" => ThetaFamily::Rational {
                a: next(),
                b: next(),
                c: next(),
                d: next(),
            },
            other => return Err(Error::InvalidSpec(format!("unknown θ family {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub q_values: Vec<QParam>,
    pub families: Vec<FamilyGrid>,
    pub interval: (Real, Real),
    pub max_order: usize,
    pub points: usize,
    pub spacing: Spacing,
    pub digits: Option<u32>,
}

fn family_parameters(family: &str) -> Result<&'static [(&'static str, i64)]> {
    Ok(match family {
        "identity" | "q_bracket" => &[],
        "affine" => &[("a", 1), ("b", 0)],
        "rational" => &[("a", 1), ("b", 0), ("c", 0), ("d", 1)],
        other => return Err(Error::Parse(format!("unknown θ family {other:?}"))),
    })
}

fn parse_family(table: BTreeMap<String, toml::Value>) -> Result<FamilyGrid> {
    let mut table = table;
    let family = match table.remove("family") {
        Some(toml::Value::String(s)) => s,
        Some(other) => return Err(Error::Parse(format!("family must be a string, got {other}"))),
        None => return Err(Error::Parse("family entry without a `family` key".into())),
    };
    let known = family_parameters(&family)?;
    let mut params = Vec::new();
    for &(name, default) in known {
        let values = match table.remove(name) {
            None => vec![Real::from_i64(default, LITERAL_DIGITS)],
            Some(v) => {
                let pv: ParamValue = v
                    .try_into()
                    .map_err(|e| Error::Parse(format!("{family}.{name}: {e}")))?;
                param_values(&pv, &format!("{family}.{name}"))?
            }
        };
        params.push(ParamGrid {
            name: name.to_string(),
            values,
        });
    }
    if let Some(extra) = table.keys().next() {
        return Err(Error::Parse(format!("{family} has no parameter {extra:?}")));
    }
    Ok(FamilyGrid { family, params })
}

fn param_values(pv: &ParamValue, what: &str) -> Result<Vec<Real>> {
    match pv {
        ParamValue::Fixed(lit) => Ok(vec![lit.to_real(LITERAL_DIGITS)?]),
        ParamValue::Range { lo, hi, steps } => {
            let lo = lo.to_real(LITERAL_DIGITS)?;
            let hi = hi.to_real(LITERAL_DIGITS)?;
            match steps {
                0 => Err(Error::Parse(format!("{what}: steps must be at least 1"))),
                1 => Ok(vec![lo]),
                &n => {
                    let last = (n - 1) as i64;
                    let step = (&hi - &lo) / last;
                    let mut v: Vec<Real> = (0..last).map(|i| &lo + &(&step * i)).collect();
                    v.push(hi);
                    Ok(v)
                }
            }
        }
    }
}

impl SweepSpec {
    pub fn from_toml(src: &str) -> Result<Self> {
        let raw: RawSweep = toml::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.q_values.is_empty() {
            return Err(Error::Parse("q_values is empty".into()));
        }
        if raw.families.is_empty() {
            return Err(Error::Parse("families is empty".into()));
        }
        let q_values = raw
            .q_values
            .iter()
            .map(|l| l.to_real(LITERAL_DIGITS).and_then(QParam::new))
            .collect::<Result<Vec<_>>>()?;
        let families = raw.families.into_iter().map(parse_family).collect::<Result<Vec<_>>>()?;
        let spacing = match raw.spacing {
            Some(s) => s.parse()?,
            None => Spacing::Logarithmic,
        };
        let spec = SweepSpec {
            q_values,
            families,
            interval: (
                raw.interval.0.to_real(LITERAL_DIGITS)?,
                raw.interval.1.to_real(LITERAL_DIGITS)?,
            ),
            max_order: raw.max_order,
            points: raw.points.unwrap_or(200),
            spacing,
            digits: raw.digits,
        };
        spec.grid(LITERAL_DIGITS)?;
        Ok(spec)
    }

    fn grid(&self, digits: u32) -> Result<GridSpec> {
        GridSpec::new(
            self.interval.0.to_digits(digits),
            self.interval.1.to_digits(digits),
            self.points,
            self.spacing,
        )
    }

    /// Rows the sweep will produce.
    pub fn cardinality(&self) -> Result<usize> {
        let mut per_q = 0;
        for f in &self.families {
            per_q += f.members()?.len();
        }
        Ok(per_q * self.q_values.len())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "no-violation")]
    NoViolation,
    #[serde(rename = "violation")]
    Violation,
    #[serde(rename = "error")]
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NoViolation => "no-violation",
            Verdict::Violation => "violation",
            Verdict::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: Real,
    pub family: String,
    pub parameters: BTreeMap<String, Real>,
    pub verdict: Verdict,
    pub min_margin: Option<Real>,
    pub violations: usize,
    pub first_violation: Option<Violation>,
    pub error: Option<String>,
}

impl SweepRow {
    /// `a=…;b=…`, empty for parameterless families.
    pub fn parameter_string(&self) -> String {
        self.parameters
            .iter()
            .map(|(k, v)| format!("{k}={}", v.to_decimal_string()))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Runs the LCM check of the q-analogue for every `(q, family, parameters)`
/// combination. Evaluation failures become `error` rows.
pub fn run_sweep(spec: &SweepSpec, cfg: &EvalConfig) -> Result<Vec<SweepRow>> {
    let d = cfg.digits();
    let grid = spec.grid(d)?;
    let mut rows = Vec::new();
    for q in &spec.q_values {
        let q = QParam::new(q.get().to_digits(d))?;
        for fam in &spec.families {
            for theta in fam.members()? {
                let theta = rescale(theta, d);
                let parameters = theta
                    .parameters()
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect();
                let fspec = FunctionSpec::OpenProblemQ {
                    q: q.clone(),
                    theta: theta.clone(),
                };
                let mut row = SweepRow {
                    q: q.get().clone(),
                    family: theta.id().to_string(),
                    parameters,
                    verdict: Verdict::Error,
                    min_margin: None,
                    violations: 0,
                    first_violation: None,
                    error: None,
                };
                match check_lcm(&fspec, &grid, spec.max_order, cfg) {
                    Ok(report) => {
                        row.verdict = if report.violations.is_empty() {
                            Verdict::NoViolation
                        } else {
                            Verdict::Violation
                        };
                        row.min_margin = report.min_margin;
                        row.violations = report.violations.len();
                        row.first_violation = report.violations.into_iter().next();
                    }
                    Err(Error::ReportsPartial(report)) => {
                        row.min_margin = report.min_margin.clone();
                        row.violations = report.violations.len();
                        row.first_violation = report.violations.first().cloned();
                        let first = &report.failures[0];
                        row.error = Some(format!(
                            "{} of {} points failed; first at t={}: {}",
                            report.failures.len(),
                            report.failures.len() + report.samples.len(),
                            first.t.to_decimal_string_with(10),
                            first.message
                        ));
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

fn rescale(theta: ThetaFamily, d: u32) -> ThetaFamily {
    match theta {
        ThetaFamily::Affine { a, b } => ThetaFamily::Affine {
            a: a.to_digits(d),
            b: b.to_digits(d),
        },
        ThetaFamily::Rational { a, b, c, d: dd } => ThetaFamily::Rational {
            a: a.to_digits(d),
            b: b.to_digits(d),
            c: c.to_digits(d),
            d: dd.to_digits(d),
        },
        other => other,
    }
}
