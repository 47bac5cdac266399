//! Grid verification of CM and LCM sign conditions, counterexample search,
//! and the series-versus-integral check for ψ_p.
//!
//! Grid points are evaluated in parallel and reduced in grid order, so a
//! report never depends on scheduling.

mod check;
mod grid;
mod laplace;
mod report;

pub use check::{check, check_cm, check_lcm, find_violation};
pub use grid::{GridSpec, Spacing, DEFAULT_INSET};
pub use laplace::{laplace_crosscheck, laplace_crosscheck_detail, LaplaceCheck};
pub use report::{CMReport, Mode, PointFailure, PointSample, Violation};
