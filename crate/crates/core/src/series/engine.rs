//! Nested-sum engine shared by every series evaluator.
//!
//! A depth-`r` sum `sum_{k1 > ... > kr > floor} prod_j f_j(k_j)` is evaluated in
//! one pass over the outer index. For each inner level `j` we keep
//! `T_j(k) = sum_{k > k_j > ... > k_r > floor} prod_{i >= j} f_i(k_i)`, updated
//! incrementally, so a truncation at `K` costs `O(K r)` and every inner level is
//! an exact finite sum.
//!
//! The tail beyond `K` is bounded using an outer envelope
//! `|f_0(K + t)| <= c rho^(t - 1)` and per-level suprema `u_j >= |f_j(m)|` for
//! `m > K`:
//!
//! ```text
//! tail <= c sum_{s >= 0} rho^s prod_j (a_j + s u_j),   a_j = sum_{m <= K} |f_j(m)|
//!      <= c sum_i p_i i! / (1 - rho)^(i + 1)
//! ```
//!
//! where `p_i` are the coefficients of the product polynomial in `s`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qarith::{CertifiedValue, QParam, Scalar};

pub(crate) trait NestedTerms<T: Scalar> {
    fn depth(&self) -> usize;

    /// Writes `f_j(k)` into `out[j]` for every level.
    fn terms_at(&self, k: u64, out: &mut [T]) -> Result<()>;

    /// Upper bound on `|f_level(m)|` over all `m > k`, for `level >= 1`.
    fn inner_sup_beyond(&self, level: usize, k: u64) -> f64;

    /// `(c, rho)` with `|f_0(k + t)| <= c rho^(t - 1)` for all `t >= 1`.
    fn outer_envelope(&self, k: u64) -> (f64, f64);

    /// All inner levels share one summand, so chain sums are elementary
    /// symmetric functions and obey `e_d <= p_1^d / d!`.
    fn identical_inner(&self) -> bool {
        false
    }
}

pub(crate) struct NestedState<T> {
    // partial[j] = T_j(next_k) for 1 <= j < r; partial[r] = 1.
    partial: Vec<T>,
    abs_partial: Vec<f64>,
    scratch: Vec<T>,
    total: T,
    next_k: u64,
    terms: u64,
}

impl<T: Scalar> NestedState<T> {
    pub(crate) fn new(depth: usize, floor: u64) -> Self {
        debug_assert!(depth >= 1);
        let mut partial = vec![T::default(); depth + 1];
        partial[depth] = T::from_real(1.0);
        Self {
            partial,
            abs_partial: vec![0.0; depth],
            scratch: vec![T::default(); depth],
            total: T::default(),
            next_k: floor + 1,
            terms: 0,
        }
    }

    pub(crate) fn step<S: NestedTerms<T> + ?Sized>(&mut self, terms: &S) -> Result<()> {
        let k = self.next_k;
        terms.terms_at(k, &mut self.scratch)?;
        let r = self.scratch.len();
        self.total += self.scratch[0] * self.partial[1];
        // ascending j reads partial[j + 1] before it is updated
        for j in 1..r {
            let f = self.scratch[j];
            let below = self.partial[j + 1];
            self.partial[j] += f * below;
            self.abs_partial[j] += f.magnitude();
        }
        self.next_k += 1;
        self.terms += 1;
        Ok(())
    }

    /// Last outer index included in the partial sum.
    pub(crate) fn last_k(&self) -> u64 {
        self.next_k - 1
    }

    pub(crate) fn terms(&self) -> u64 {
        self.terms
    }

    pub(crate) fn tail_bound<S: NestedTerms<T> + ?Sized>(&self, terms: &S) -> f64 {
        let k = self.last_k();
        let (c, rho) = terms.outer_envelope(k);
        if !(c.is_finite() && rho < 1.0) {
            return f64::INFINITY;
        }
        let r = self.scratch.len();
        // coefficients of prod_j (a_j + s u_j), ascending powers of s
        let mut poly = vec![0.0; r];
        poly[0] = 1.0;
        for j in 1..r {
            let a = self.abs_partial[j];
            let u = terms.inner_sup_beyond(j, k);
            if !u.is_finite() {
                return f64::INFINITY;
            }
            for i in (0..j).rev() {
                let p = poly[i];
                poly[i + 1] += p * u;
                poly[i] = p * a;
            }
        }
        let inv = 1.0 / (1.0 - rho);
        let mut bound = 0.0;
        let mut fact = 1.0;
        let mut pow = inv;
        for (i, p) in poly.iter().enumerate() {
            if i > 0 {
                fact *= i as f64;
                pow *= inv;
            }
            bound += p * fact * pow;
        }
        if terms.identical_inner() {
            bound /= factorial(r - 1);
        }
        c * bound
    }

    pub(crate) fn certified(&self, tail: f64) -> CertifiedValue<T> {
        CertifiedValue::new(self.total, tail, self.terms)
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Sums until the certified tail drops to `qp.tol()`.
pub(crate) fn sum_adaptive<T: Scalar, S: NestedTerms<T> + ?Sized>(
    terms: &S,
    floor: u64,
    qp: &QParam,
) -> Result<CertifiedValue<T>> {
    let mut state = NestedState::new(terms.depth(), floor);
    loop {
        state.step(terms)?;
        let tail = state.tail_bound(terms);
        if tail <= qp.tol() {
            return Ok(state.certified(tail));
        }
        if state.terms() >= qp.max_terms() {
            return Err(budget_exceeded(&state.certified(tail), qp.tol()));
        }
    }
}

/// Sums exactly `cutoff` outer terms and reports the tail bound at that point.
pub(crate) fn sum_to_cutoff<T: Scalar, S: NestedTerms<T> + ?Sized>(
    terms: &S,
    floor: u64,
    cutoff: u64,
) -> Result<CertifiedValue<T>> {
    let mut state = NestedState::new(terms.depth(), floor);
    for _ in 0..cutoff.max(1) {
        state.step(terms)?;
    }
    let tail = state.tail_bound(terms);
    Ok(state.certified(tail))
}

pub(crate) fn budget_exceeded<T: Scalar>(partial: &CertifiedValue<T>, tol: f64) -> Error {
    Error::BudgetExceeded {
        partial: CertifiedValue::<Complex64>::new(
            partial.value.to_complex(),
            partial.tail_bound,
            partial.terms_used,
        ),
        tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // sum_{k1 > k2 > 0} 2^-k1 2^-k2, closed form 1/3.
    struct Geometric;

    impl NestedTerms<f64> for Geometric {
        fn depth(&self) -> usize {
            2
        }
        fn terms_at(&self, k: u64, out: &mut [f64]) -> Result<()> {
            let v = 0.5f64.powi(k as i32);
            out[0] = v;
            out[1] = v;
            Ok(())
        }
        fn inner_sup_beyond(&self, _level: usize, k: u64) -> f64 {
            0.5f64.powi(k as i32 + 1)
        }
        fn outer_envelope(&self, k: u64) -> (f64, f64) {
            (0.5f64.powi(k as i32 + 1), 0.5)
        }
    }

    #[test]
    fn geometric_double_sum() {
        let qp = QParam::with_tol(0.5, 1e-14).unwrap();
        let v = sum_adaptive(&Geometric, 0, &qp).unwrap();
        assert!((v.value - 1.0 / 3.0).abs() <= v.tail_bound + 1e-16);
        assert!(v.tail_bound <= 1e-14);
    }

    #[test]
    fn cutoff_tail_bound_is_honest() {
        for cutoff in 1..30 {
            let v = sum_to_cutoff(&Geometric, 0, cutoff).unwrap();
            assert!((v.value - 1.0 / 3.0).abs() <= v.tail_bound * (1.0 + 1e-12) + 1e-16);
        }
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let qp = QParam::new(0.5, 1e-300, 10).unwrap();
        match sum_adaptive(&Geometric, 0, &qp) {
            Err(Error::BudgetExceeded { partial, .. }) => {
                assert_eq!(partial.terms_used, 10);
                assert!(partial.value.re > 0.3);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
