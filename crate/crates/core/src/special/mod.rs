//! Point evaluation of ψ, ψ^{(n)}, Γ_p, ψ_p, ψ_p^{(n)} and the q-digamma.
//!
//! Every routine also has a `*_tower` form returning all derivatives up to a
//! requested order at one point; the jet module composes those towers.

mod bernoulli;
mod digamma;
mod pgamma;
mod qdigamma;

pub use digamma::{digamma, digamma_tower, polygamma};
pub use pgamma::{gamma_p, ln_gamma_p, psi_p, psi_p_deriv, psi_p_tower, PIndex};
pub use qdigamma::{q_digamma_deriv, q_digamma_tower, QParam};
