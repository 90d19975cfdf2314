//! q-integers and the precision contract shared by all evaluators.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `k` for which `[k]_q` is summed directly rather than through the
/// closed form `(1 - q^k) / (1 - q)`.
pub const HORNER_LIMIT: i64 = 64;

/// Rounding budget per summed term, in machine epsilons relative to the value.
pub const ROUNDING_EPS_PER_TERM: f64 = 8.0;

/// Default truncation budget per series level.
pub const DEFAULT_MAX_TERMS: u64 = 2_000_000;

/// The deformation parameter together with the accuracy requested from an
/// evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QParam {
    q: f64,
    tol: f64,
    max_terms: u64,
}

impl QParam {
    pub fn new(q: f64, tol: f64, max_terms: u64) -> Result<Self> {
        // NaN fails both comparisons
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidQ(q));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidTolerance(tol));
        }
        if max_terms == 0 {
            return Err(Error::InvalidBudget);
        }
        Ok(Self { q, tol, max_terms })
    }

    /// `q` with a default term budget.
    pub fn with_tol(q: f64, tol: f64) -> Result<Self> {
        Self::new(q, tol, DEFAULT_MAX_TERMS)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_terms(&self) -> u64 {
        self.max_terms
    }

    /// Same `q` and budget, different tolerance.
    pub fn retol(&self, tol: f64) -> Result<Self> {
        Self::new(self.q, tol, self.max_terms)
    }

    /// `1 - q`, the deformation parameter of the stuffle algebra.
    pub fn eps(&self) -> f64 {
        1.0 - self.q
    }
}

/// `[k]_q = (1 - q^k) / (1 - q)` for nonzero `k`.
pub fn q_int(k: i64, qp: &QParam) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroQInt);
    }
    Ok(qint_raw(k, qp.q))
}

/// Unchecked `[k]_q`; `k` must be nonzero and `0 < q < 1`.
pub(crate) fn qint_raw(k: i64, q: f64) -> f64 {
    debug_assert!(k != 0);
    if (1..=HORNER_LIMIT).contains(&k) {
        let mut acc = 1.0;
        for _ in 1..k {
            acc = 1.0 + q * acc;
        }
        acc
    } else {
        (1.0 - powi(q, k)) / (1.0 - q)
    }
}

/// `q^k` for any integer `k`, splitting exponents that overflow `i32`.
pub(crate) fn powi(q: f64, k: i64) -> f64 {
    if let Ok(k32) = i32::try_from(k) {
        q.powi(k32)
    } else {
        q.powf(k as f64)
    }
}

/// `|[k]_q - k|` for each `q` in the sequence.
///
/// Along a sequence of `q` increasing towards 1 the deviations decrease
/// strictly (for `k >= 2`); for `k = 1` they are all zero.
pub fn q_int_limit_check(k: u64, q_seq: &[QParam]) -> Vec<f64> {
    let k = k.max(1) as i64;
    q_seq
        .iter()
        .map(|qp| (qint_raw(k, qp.q) - k as f64).abs())
        .collect()
}

/// Numeric field used by the series engine: `f64` for the zeta evaluators,
/// `Complex64` where a complex shift enters.
pub trait Scalar:
    Copy
    + Default
    + Send
    + Sync
    + std::fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + AddAssign
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn magnitude(&self) -> f64;
    fn from_real(x: f64) -> Self;
    fn to_complex(self) -> Complex64;
    fn scale(self, s: f64) -> Self;
}

impl Scalar for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl Scalar for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

/// A value together with a certified bound on the omitted series tail.
///
/// `tail_bound` covers truncation only; floating-point rounding is accounted
/// for separately by [`CertifiedValue::rounding_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedValue<T = f64> {
    pub value: T,
    pub tail_bound: f64,
    pub terms_used: u64,
}

impl<T: Scalar> CertifiedValue<T> {
    pub fn new(value: T, tail_bound: f64, terms_used: u64) -> Self {
        Self {
            value,
            tail_bound,
            terms_used,
        }
    }

    /// A value with no truncation error (closed forms, finite sums).
    pub fn exact(value: T) -> Self {
        Self::new(value, 0.0, 0)
    }

    /// `terms_used x 8 eps x |value|`, floored at one term.
    pub fn rounding_bound(&self) -> f64 {
        self.terms_used.max(1) as f64
            * ROUNDING_EPS_PER_TERM
            * f64::EPSILON
            * self.value.magnitude()
    }

    /// Tail bound plus rounding budget.
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.rounding_bound()
    }

    pub fn to_complex(&self) -> CertifiedValue<Complex64> {
        CertifiedValue::new(self.value.to_complex(), self.tail_bound, self.terms_used)
    }
}

impl CertifiedValue<f64> {
    /// Sum of certified values; bounds add, `terms_used` is the maximum.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a CertifiedValue<f64>>) -> Self {
        items.into_iter().fold(Self::exact(0.0), |acc, v| {
            Self::new(
                acc.value + v.value,
                acc.tail_bound + v.tail_bound,
                acc.terms_used.max(v.terms_used),
            )
        })
    }

    /// Product of two certified values with the first-order-plus-cross bound
    /// `|a| eb + |b| ea + ea eb`.
    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self, other);
        Self::new(
            a.value * b.value,
            a.value.abs() * b.tail_bound
                + b.value.abs() * a.tail_bound
                + a.tail_bound * b.tail_bound,
            a.terms_used.max(b.terms_used),
        )
    }
}
