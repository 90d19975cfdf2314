use num_complex::Complex64;
use thiserror::Error;

use crate::indices::MultiIndex;
use crate::qarith::CertifiedValue;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q = {0} is outside the open interval (0, 1)")]
    InvalidQ(f64),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("term budget must be at least 1")]
    InvalidBudget,

    #[error("the q-integer [0]_q is zero and cannot be used")]
    ZeroQInt,

    #[error("invalid multi-index: {0}")]
    InvalidIndex(String),

    #[error("divergent: leading exponent must exceed 1 (index {0})")]
    DivergentSeries(MultiIndex),

    #[error(
        "term budget exhausted after {} terms: tail bound {} exceeds tolerance {tol}",
        .partial.terms_used, .partial.tail_bound
    )]
    BudgetExceeded {
        partial: CertifiedValue<Complex64>,
        tol: f64,
    },

    #[error("argument lies within {distance:e} of a pole (at m = {m})")]
    PoleProximity { m: u64, distance: f64 },

    #[error("expression key {0} is not admissible for numeric evaluation")]
    NonAdmissibleKey(MultiIndex),

    #[error("power series shapes differ: {0}")]
    ShapeMismatch(String),

    #[error("power series constant term: {0}")]
    ConstantTerm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
