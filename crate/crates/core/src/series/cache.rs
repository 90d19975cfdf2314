use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::Result;
use crate::indices::MultiIndex;
use crate::qarith::{CertifiedValue, QParam};

use super::zeta::{eval_qmzv, eval_qmzv_star};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    star: bool,
    parts: Vec<u32>,
    q_bits: u64,
    tol_bits: u64,
    max_terms: u64,
}

impl CacheKey {
    fn new(star: bool, idx: &MultiIndex, qp: &QParam) -> Self {
        Self {
            star,
            parts: idx.parts().to_vec(),
            q_bits: qp.q().to_bits(),
            tol_bits: qp.tol().to_bits(),
            max_terms: qp.max_terms(),
        }
    }
}

/// Memoizing front end for the zeta evaluators.
///
/// Entries are keyed by the exact bit patterns of `q` and `tol`, so a cached
/// result is identical to a fresh evaluation. The cache is shareable across
/// threads; errors are not cached.
#[derive(Debug, Default)]
pub struct Evaluator {
    cache: Mutex<HashMap<CacheKey, CertifiedValue>>,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn qmzv(&self, idx: &MultiIndex, qp: &QParam) -> Result<CertifiedValue> {
        self.lookup(CacheKey::new(false, idx, qp), || eval_qmzv(idx, qp))
    }

    pub fn qmzv_star(&self, idx: &MultiIndex, qp: &QParam) -> Result<CertifiedValue> {
        self.lookup(CacheKey::new(true, idx, qp), || eval_qmzv_star(idx, qp))
    }

    pub fn len(&self) -> usize {
        self.cache.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lookup(
        &self,
        key: CacheKey,
        compute: impl FnOnce() -> Result<CertifiedValue>,
    ) -> Result<CertifiedValue> {
        if let Some(hit) = self.cache.lock().expect("cache lock poisoned").get(&key) {
            return Ok(*hit);
        }
        // computed outside the lock; concurrent misses produce identical values
        let value = compute()?;
        self.cache
            .lock()
            .expect("cache lock poisoned")
            .insert(key, value);
        Ok(value)
    }
}
