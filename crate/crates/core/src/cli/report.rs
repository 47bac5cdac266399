//! Report documents and their JSON / CSV encodings.
//!
//! Every number is written as a decimal string at the precision it was
//! computed with, so a JSON report parses back to the same values.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::sweep::SweepRow;
use crate::checker::{CMReport, LaplaceCheck};
use crate::error::{Error, Result};

pub const TOOL_NAME: &str = "cm-lab";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Check { report: Box<CMReport> },
    Sweep { rows: Vec<SweepRow> },
    Laplace { rows: Vec<LaplaceRow> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceRow {
    #[serde(flatten)]
    pub check: LaplaceCheck,
    pub within_contract: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    /// Echo of the inputs that produced the report.
    pub input: BTreeMap<String, String>,
    pub body: ReportBody,
}

impl ReportDocument {
    pub fn new(timestamp: String, input: BTreeMap<String, String>, body: ReportBody) -> Self {
        ReportDocument {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            input,
            body,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// One header row and one record per data row of the body.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        match &self.body {
            ReportBody::Check { report } => {
                w.write_record(["function", "mode", "t", "order", "signed_value", "status"])
                    .map_err(io)?;
                let label = report.function.label();
                let tol = -&report.sign_tolerance;
                for s in &report.samples {
                    let t = s.t.to_decimal_string();
                    for (k, v) in s.signed.iter().enumerate() {
                        let status = if *v < tol { "violation" } else { "ok" };
                        let order = (report.first_order() + k).to_string();
                        w.write_record([
                            label.as_str(),
                            report.mode.as_str(),
                            t.as_str(),
                            order.as_str(),
                            v.to_decimal_string().as_str(),
                            status,
                        ])
                        .map_err(io)?;
                    }
                }
                for f in &report.failures {
                    let status = format!("failed: {}", f.message);
                    w.write_record([
                        label.as_str(),
                        report.mode.as_str(),
                        f.t.to_decimal_string().as_str(),
                        "",
                        "",
                        status.as_str(),
                    ])
                    .map_err(io)?;
                }
            }
            ReportBody::Sweep { rows } => {
                w.write_record([
                    "q",
                    "family",
                    "parameters",
                    "verdict",
                    "min_margin",
                    "violations",
                    "first_violation_t",
                    "first_violation_order",
                    "error",
                ])
                .map_err(io)?;
                for r in rows {
                    let (vt, vo) = match &r.first_violation {
                        Some(v) => (v.t.to_decimal_string(), v.order.to_string()),
                        None => (String::new(), String::new()),
                    };
                    w.write_record([
                        r.q.to_decimal_string(),
                        r.family.clone(),
                        r.parameter_string(),
                        r.verdict.as_str().to_string(),
                        r.min_margin.as_ref().map(|m| m.to_decimal_string()).unwrap_or_default(),
                        r.violations.to_string(),
                        vt,
                        vo,
                        r.error.clone().unwrap_or_default(),
                    ])
                    .map_err(io)?;
                }
            }
            ReportBody::Laplace { rows } => {
                w.write_record([
                    "p",
                    "x",
                    "series",
                    "integral",
                    "discrepancy",
                    "error_estimate",
                    "within_contract",
                ])
                .map_err(io)?;
                for r in rows {
                    let c = &r.check;
                    w.write_record([
                        c.p.to_string(),
                        c.x.to_decimal_string(),
                        c.series.to_decimal_string(),
                        c.integral.to_decimal_string(),
                        c.discrepancy.to_decimal_string(),
                        c.error_estimate.to_decimal_string(),
                        r.within_contract.to_string(),
                    ])
                    .map_err(io)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn write_to(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        let s = self.render(format)?;
        out.write_all(s.as_bytes())
            .map_err(|e| Error::Parse(format!("cannot write report: {e}")))
    }
}
