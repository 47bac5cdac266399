//! Extended-precision arithmetic, configuration, constants and quadrature.

mod config;
mod constants;
mod quadrature;
mod real;
pub(crate) mod series;

pub use config::{
    EvalConfig, DEFAULT_DIGITS, DEFAULT_MAX_ORDER, DEFAULT_MAX_POLYGAMMA_ORDER, DEFAULT_MAX_SERIES_TERMS, JET_ORDER_CAP,
};
pub use constants::euler_gamma;
pub use quadrature::{integrate_semi_infinite, Quadrature};
pub use real::{bits_for_digits, Real, MIN_DIGITS};
