//! Numerical laboratory for completely monotonic (CM) and logarithmically
//! completely monotonic (LCM) functions built from ψ, ψ_p and ψ_q.
//!
//! Layers, bottom-up:
//!
//! * [`kernel`]: decimal-precision reals, configuration, γ, quadrature;
//! * [`special`]: ψ, polygamma, Γ_p, ψ_p and the q-digamma;
//! * [`jet`]: Taylor jets and expression trees;
//! * [`functions`]: builders for the functions under study;
//! * [`checker`]: CM/LCM grid checks, violation search, Laplace cross-check;
//! * [`cli`]: the `cm-lab` command-line front end and report formats.

pub mod checker;
pub mod cli;
pub mod error;
pub mod functions;
pub mod jet;
pub mod kernel;
pub mod special;

pub use error::{Error, Result};
pub use kernel::{EvalConfig, Real};
