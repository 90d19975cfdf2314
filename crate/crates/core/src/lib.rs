//! Certified numerics for multiple q-zeta values.
//!
//! The crate evaluates the nested q-series
//!
//! ```text
//! zeta[n1, ..., nr] = sum_{k1 > ... > kr > 0} prod_j q^((nj - 1) kj) / [kj]_q^nj
//! ```
//!
//! together with the shifted form `zeta*`, the classical `q -> 1` values, and a
//! family of auxiliary series. Every evaluator returns a [`CertifiedValue`] whose
//! `tail_bound` covers the omitted remainder of the truncated series.
//!
//! On top of the evaluators sit the q-stuffle algebra ([`stuffle`]), a small
//! truncated multivariate power-series ring ([`powerseries`]) and the identity
//! checkers in [`verify`], which turn each identity into a structured report with
//! a computed error budget.

pub mod cli;
pub mod error;
pub mod indices;
pub mod powerseries;
pub mod qarith;
pub mod series;
pub mod stuffle;
pub mod verify;

pub use error::{Error, Result};
pub use indices::{IndexClass, MultiIndex};
pub use qarith::{q_int, CertifiedValue, QParam};
