//! Arbitrary-order derivatives by truncated Taylor arithmetic.
//!
//! A [`Jet`] of order `N` at `t0` holds `f^{(k)}(t0)/k!` for `k ≤ N`.
//! Sums are coefficient-wise, products are Cauchy products, and the special
//! functions enter through their derivative towers.

mod expr;
#[allow(clippy::module_inception)]
mod jet;

pub use expr::{derivative, Expr};
pub use jet::{jet_combine, jet_compose, Jet, JetOp, Primitive};
