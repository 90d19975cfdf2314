//! Certified evaluation of the concrete series: multiple q-zeta values, their
//! shifted and classical variants, the generating-function sides, and the
//! `A`/`B` building blocks.

mod ab;
mod cache;
pub(crate) mod engine;
mod genfun;
mod zeta;

pub use ab::{closed_am, closed_bm, eval_a, eval_a_all, eval_b};
pub use cache::Evaluator;
pub use genfun::{eval_lr, eval_rr, pole_margin};
pub use zeta::{eval_mzv, eval_qmzv, eval_qmzv_star, eval_qmzv_truncated, CLASSICAL_MAX_TERMS};
