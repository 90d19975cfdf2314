//! Multiple q-zeta values, their shifted form, and the classical limit.

use crate::error::{Error, Result};
use crate::indices::MultiIndex;
use crate::qarith::{powi, qint_raw, CertifiedValue, QParam};

use super::engine::{self, NestedState, NestedTerms};

/// Summands `q^((n - 1) k) / [k]^n` per level; with `star` the outer level
/// carries the extra factor `q^k / [k]`.
struct QmzvTerms<'a> {
    parts: &'a [u32],
    q: f64,
    star: bool,
}

impl QmzvTerms<'_> {
    fn level_term(&self, level: usize, qk: f64, qi: f64) -> f64 {
        let n = self.parts[level] as i32;
        let base = qk.powi(n - 1) / qi.powi(n);
        if level == 0 && self.star {
            (qk / qi) * base
        } else {
            base
        }
    }

    fn term(&self, level: usize, k: u64) -> f64 {
        let qk = powi(self.q, k as i64);
        let qi = qint_raw(k as i64, self.q);
        self.level_term(level, qk, qi)
    }
}

impl NestedTerms<f64> for QmzvTerms<'_> {
    fn depth(&self) -> usize {
        self.parts.len()
    }

    fn terms_at(&self, k: u64, out: &mut [f64]) -> Result<()> {
        let qk = powi(self.q, k as i64);
        let qi = qint_raw(k as i64, self.q);
        for (level, slot) in out.iter_mut().enumerate() {
            *slot = self.level_term(level, qk, qi);
        }
        Ok(())
    }

    // every level summand is decreasing in k
    fn inner_sup_beyond(&self, level: usize, k: u64) -> f64 {
        self.term(level, k + 1)
    }

    fn outer_envelope(&self, k: u64) -> (f64, f64) {
        let decay = self.parts[0] - 1 + u32::from(self.star);
        (self.term(0, k + 1), self.q.powi(decay as i32))
    }
}

/// `zeta[idx]` at `qp.q()`, to absolute accuracy `qp.tol()`.
pub fn eval_qmzv(idx: &MultiIndex, qp: &QParam) -> Result<CertifiedValue> {
    if !idx.is_admissible() {
        return Err(Error::DivergentSeries(idx.clone()));
    }
    let terms = QmzvTerms {
        parts: idx.parts(),
        q: qp.q(),
        star: false,
    };
    engine::sum_adaptive(&terms, 0, qp)
}

/// `zeta*[idx] = zeta[n1 + 1, n2, ..., nr]`, summed with the shift kept as a
/// separate `q^k / [k]` factor on the outer level.
pub fn eval_qmzv_star(idx: &MultiIndex, qp: &QParam) -> Result<CertifiedValue> {
    let terms = QmzvTerms {
        parts: idx.parts(),
        q: qp.q(),
        star: true,
    };
    engine::sum_adaptive(&terms, 0, qp)
}

/// `zeta[idx]` truncated after `cutoff` outer terms, with the certified tail
/// bound at that cutoff.
pub fn eval_qmzv_truncated(idx: &MultiIndex, q: f64, cutoff: u64) -> Result<CertifiedValue> {
    if !idx.is_admissible() {
        return Err(Error::DivergentSeries(idx.clone()));
    }
    QParam::with_tol(q, 1.0)?;
    let terms = QmzvTerms {
        parts: idx.parts(),
        q,
        star: false,
    };
    engine::sum_to_cutoff(&terms, 0, cutoff)
}

/// Term budget for the classical evaluator, whose tails decay only
/// polynomially.
pub const CLASSICAL_MAX_TERMS: u64 = 200_000_000;

const CLASSICAL_CHECK_EVERY: u64 = 1024;

struct ClassicalTerms<'a> {
    parts: &'a [u32],
}

impl NestedTerms<f64> for ClassicalTerms<'_> {
    fn depth(&self) -> usize {
        self.parts.len()
    }

    fn terms_at(&self, k: u64, out: &mut [f64]) -> Result<()> {
        let kf = k as f64;
        for (slot, &n) in out.iter_mut().zip(self.parts) {
            *slot = kf.powi(-(n as i32));
        }
        Ok(())
    }

    // unused: the classical tail is bounded by an integral instead
    fn inner_sup_beyond(&self, _level: usize, _k: u64) -> f64 {
        f64::INFINITY
    }

    fn outer_envelope(&self, _k: u64) -> (f64, f64) {
        (f64::INFINITY, 1.0)
    }
}

/// Integral bound on `sum_{k > K} k^-n1 prod_j S_j(k)` where each inner chain
/// factor is bounded by `1 + ln k` (exponent 1) or `n / (n - 1)` (exponent
/// `n >= 2`). Returns infinity while the summand is not yet decreasing.
fn classical_tail(parts: &[u32], cutoff: u64) -> f64 {
    let a = f64::from(parts[0] - 1);
    let p = parts[1..].iter().filter(|&&n| n == 1).count();
    let c: f64 = parts[1..]
        .iter()
        .filter(|&&n| n >= 2)
        .map(|&n| f64::from(n) / f64::from(n - 1))
        .product();
    let k = cutoff as f64;
    let log_k = k.ln();
    if log_k <= p as f64 / f64::from(parts[0]) - 1.0 {
        return f64::INFINITY;
    }
    // int_{ln K}^inf e^{-a u} (1 + u)^p du
    //   = K^{-a} sum_{i=0}^{p} p!/(p-i)! (1 + ln K)^{p-i} / a^{i+1}
    let x = 1.0 + log_k;
    let mut sum = 0.0;
    let mut falling = 1.0;
    for i in 0..=p {
        if i > 0 {
            falling *= (p - i + 1) as f64;
        }
        sum += falling * x.powi((p - i) as i32) / a.powi(i as i32 + 1);
    }
    c * k.powf(-a) * sum
}

/// Classical multiple zeta value `zeta(idx)` to absolute accuracy `tol`.
///
/// Convergence is polynomial, so this is meant for accuracies around `1e-6`.
pub fn eval_mzv(idx: &MultiIndex, tol: f64) -> Result<CertifiedValue> {
    if !idx.is_admissible() {
        return Err(Error::DivergentSeries(idx.clone()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let terms = ClassicalTerms { parts: idx.parts() };
    let mut state = NestedState::new(idx.depth(), 0);
    loop {
        state.step(&terms)?;
        let n = state.terms();
        if n % CLASSICAL_CHECK_EVERY == 0 || n >= CLASSICAL_MAX_TERMS {
            let tail = classical_tail(idx.parts(), state.last_k());
            if tail <= tol {
                return Ok(state.certified(tail));
            }
            if n >= CLASSICAL_MAX_TERMS {
                return Err(engine::budget_exceeded(&state.certified(tail), tol));
            }
        }
    }
}
