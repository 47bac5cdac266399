use thiserror::Error;

use crate::checker::CMReport;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("jets disagree on base point or order")]
    MismatchedJets,

    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("function is not positive at t = {t}")]
    NonPositiveFunction { t: String },

    #[error("{} grid point(s) failed to evaluate", .0.failures.len())]
    ReportsPartial(Box<CMReport>),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
