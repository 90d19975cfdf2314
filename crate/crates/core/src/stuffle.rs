//! Formal q-stuffle algebra on multi-indices.
//!
//! Coefficients are integer polynomials in `eps = 1 - q`. The product rule
//! comes from `1/[k] = (1 - q) + q^k/[k]`: when two heads `a` and `b` land on
//! the same summation index they produce `zeta[a + b] + eps zeta[a + b - 1]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices::MultiIndex;
use crate::qarith::{CertifiedValue, QParam};
use crate::series::{eval_qmzv, Evaluator};

/// Integer polynomial in `eps`, `coeffs[i]` multiplying `eps^i`. Trailing
/// zeros are trimmed, so zero is the empty list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EpsPoly(Vec<i64>);

impl EpsPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// `c * eps`.
    pub fn eps(c: i64) -> Self {
        Self::new(vec![0, c])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Lowest power of `eps` with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            out.push(a.checked_add(b)?);
        }
        Some(Self::new(out))
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.0.iter().map(|&x| x * c).collect())
    }

    /// Multiply by `eps`.
    pub fn shift_eps(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.push(0);
        out.extend_from_slice(&self.0);
        Self(out)
    }

    pub fn eval(&self, eps: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * eps + c as f64)
    }

    /// `sum_i |c_i| eps^i` for `eps >= 0`.
    pub fn eval_abs(&self, eps: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * eps + (c as f64).abs())
    }

    /// Constant coefficient, i.e. the value at `eps = 0` (`q = 1`).
    pub fn at_zero(&self) -> i64 {
        self.0.first().copied().unwrap_or(0)
    }
}

impl std::ops::Add for &EpsPoly {
    type Output = EpsPoly;

    fn add(self, other: &EpsPoly) -> EpsPoly {
        self.checked_add(other).expect("eps coefficient overflow")
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("eps")?,
                (1, _) => write!(f, "{a}eps")?,
                (_, 1) => write!(f, "eps^{i}")?,
                _ => write!(f, "{a}eps^{i}")?,
            }
        }
        Ok(())
    }
}

/// Formal linear combination of `zeta[idx]` with `EpsPoly` coefficients.
///
/// Zero coefficients are never stored. Keys may be non-admissible; such
/// expressions are only rejected when evaluated numerically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StuffleExpr {
    terms: BTreeMap<MultiIndex, EpsPoly>,
}

impl StuffleExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(idx: MultiIndex, coeff: EpsPoly) -> Self {
        let mut e = Self::new();
        e.add_term(idx, coeff);
        e
    }

    pub fn add_term(&mut self, idx: MultiIndex, coeff: EpsPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(idx).or_default();
        *slot = &*slot + &coeff;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::new();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.scale(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Option<&EpsPoly> {
        self.terms.get(idx)
    }

    /// Terms in canonical (descending lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &EpsPoly)> {
        self.terms.iter().rev()
    }

    pub fn non_admissible_keys(&self) -> Vec<&MultiIndex> {
        self.terms()
            .map(|(k, _)| k)
            .filter(|k| !k.is_admissible())
            .collect()
    }

    /// The coefficients evaluated at `eps = 0`, keeping integer multiplicities.
    pub fn classical_limit(&self) -> BTreeMap<MultiIndex, i64> {
        self.terms
            .iter()
            .filter_map(|(k, c)| {
                let v = c.at_zero();
                (v != 0).then(|| (k.clone(), v))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("expression serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: WireExpr = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("expression JSON: {e}")))?;
        let mut out = Self::new();
        for term in wire.terms {
            let idx = MultiIndex::new(term.index)?;
            let coeff = EpsPoly::new(term.eps);
            let merged = match out.terms.get(&idx) {
                Some(prev) => prev
                    .checked_add(&coeff)
                    .ok_or_else(|| Error::InvalidArgument("coefficient overflow".into()))?,
                None => coeff,
            };
            if merged.is_zero() {
                out.terms.remove(&idx);
            } else {
                out.terms.insert(idx, merged);
            }
        }
        Ok(out)
    }

    fn to_wire(&self) -> WireExpr {
        WireExpr {
            terms: self
                .terms()
                .map(|(k, c)| WireTerm {
                    index: k.parts().to_vec(),
                    eps: c.coeffs().to_vec(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for StuffleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})zeta{k}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireExpr {
    terms: Vec<WireTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireTerm {
    index: Vec<u32>,
    eps: Vec<i64>,
}

type Words = BTreeMap<Vec<u32>, EpsPoly>;

fn add_word(out: &mut Words, word: Vec<u32>, coeff: EpsPoly) {
    if coeff.is_zero() {
        return;
    }
    let slot = out.entry(word).or_default();
    *slot = &*slot + &coeff;
}

fn prepend(out: &mut Words, head: u32, tails: &Words, eps_power: bool) {
    for (tail, c) in tails {
        let mut word = Vec::with_capacity(tail.len() + 1);
        word.push(head);
        word.extend_from_slice(tail);
        let coeff = if eps_power { c.shift_eps() } else { c.clone() };
        add_word(out, word, coeff);
    }
}

fn quasi_shuffle(a: &[u32], b: &[u32]) -> Words {
    let mut out = Words::new();
    if a.is_empty() || b.is_empty() {
        let word = if a.is_empty() { b } else { a };
        out.insert(word.to_vec(), EpsPoly::constant(1));
        return out;
    }
    let (a1, rest_a) = (a[0], &a[1..]);
    let (b1, rest_b) = (b[0], &b[1..]);
    prepend(&mut out, a1, &quasi_shuffle(rest_a, b), false);
    prepend(&mut out, b1, &quasi_shuffle(a, rest_b), false);
    let both = quasi_shuffle(rest_a, rest_b);
    prepend(&mut out, a1 + b1, &both, false);
    prepend(&mut out, a1 + b1 - 1, &both, true);
    out.retain(|_, c| !c.is_zero());
    out
}

/// Formal expansion of `zeta[a] zeta[b]`.
pub fn qstuffle(a: &MultiIndex, b: &MultiIndex) -> StuffleExpr {
    let mut out = StuffleExpr::new();
    for (word, c) in quasi_shuffle(a.parts(), b.parts()) {
        // heads are positive and merges only add, so every word is valid
        let idx = MultiIndex::new(word).expect("stuffle words have positive parts");
        out.add_term(idx, c);
    }
    out
}

/// The q-analogue of Euler's reduction of `zeta[m, 1]`:
///
/// ```text
/// 2 zeta[m,1] = m zeta[m+1] + eps (m-2) zeta[m] - sum_{k=1}^{m-2} zeta[m-k] zeta[k+1]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct EulerReduction {
    pub m: u32,
    /// `m zeta[m+1] + eps (m - 2) zeta[m]`
    pub linear: StuffleExpr,
    /// `(m - k, k + 1)` for `k = 1..=m-2`; each product is subtracted.
    pub products: Vec<(u32, u32)>,
}

impl EulerReduction {
    fn index(parts: &[u32]) -> MultiIndex {
        MultiIndex::new(parts.to_vec()).expect("positive parts")
    }

    /// `2 zeta[m,1] - linear + sum of stuffled products`, fully expanded.
    ///
    /// This vanishes exactly when the depth-2 sum formula holds.
    pub fn relation(&self) -> StuffleExpr {
        let m = self.m;
        let mut rel =
            StuffleExpr::single(Self::index(&[m, 1]), EpsPoly::constant(2)).sub(&self.linear);
        for &(s, t) in &self.products {
            rel = rel.add(&qstuffle(&Self::index(&[s]), &Self::index(&[t])));
        }
        rel
    }

    /// `2 (sum_{s+t=m+1, s>=2, t>=1} zeta[s,t] - zeta[m+1])`.
    pub fn sum_formula_multiple(&self) -> StuffleExpr {
        let m = self.m;
        let mut e = StuffleExpr::single(Self::index(&[m + 1]), EpsPoly::constant(-2));
        for s in 2..=m {
            e.add_term(Self::index(&[s, m + 1 - s]), EpsPoly::constant(2));
        }
        e
    }

    /// The expanded relation is exactly twice the depth-2 sum formula.
    pub fn is_consistent(&self) -> bool {
        self.relation() == self.sum_formula_multiple()
    }

    /// Coefficients of `linear` at `q = 1`: only `m zeta(m+1)` survives.
    pub fn classical_linear(&self) -> BTreeMap<MultiIndex, i64> {
        self.linear.classical_limit()
    }
}

pub fn reduce_zeta_m1(m: u32) -> Result<EulerReduction> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "reduction of zeta[m,1] needs m >= 2, got {m}"
        )));
    }
    let mut linear = StuffleExpr::single(
        EulerReduction::index(&[m + 1]),
        EpsPoly::constant(i64::from(m)),
    );
    linear.add_term(EulerReduction::index(&[m]), EpsPoly::eps(i64::from(m - 2)));
    let products = (1..=m.saturating_sub(2)).map(|k| (m - k, k + 1)).collect();
    Ok(EulerReduction {
        m,
        linear,
        products,
    })
}

fn eval_with(
    e: &StuffleExpr,
    qp: &QParam,
    mut zeta: impl FnMut(&MultiIndex) -> Result<CertifiedValue>,
) -> Result<CertifiedValue> {
    if let Some(bad) = e.non_admissible_keys().first() {
        return Err(Error::NonAdmissibleKey((*bad).clone()));
    }
    let eps = qp.eps();
    let mut value = 0.0;
    let mut tail = 0.0;
    let mut terms_used = 0;
    for (idx, c) in e.terms() {
        let z = zeta(idx)?;
        value += c.eval(eps) * z.value;
        tail += c.eval_abs(eps) * z.error_bound();
        terms_used = terms_used.max(z.terms_used);
    }
    Ok(CertifiedValue::new(value, tail, terms_used))
}

/// Numeric value of an expression at `q`.
///
/// The returned `tail_bound` is `sum |coeff| (tail + rounding)` over the
/// constituent zeta values.
pub fn eval_expr(e: &StuffleExpr, qp: &QParam) -> Result<CertifiedValue> {
    eval_with(e, qp, |idx| eval_qmzv(idx, qp))
}

/// [`eval_expr`] through a memoizing evaluator.
pub fn eval_expr_with(ev: &Evaluator, e: &StuffleExpr, qp: &QParam) -> Result<CertifiedValue> {
    eval_with(e, qp, |idx| ev.qmzv(idx, qp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(p: &[u32]) -> MultiIndex {
        MultiIndex::new(p.to_vec()).unwrap()
    }

    fn expr(items: &[(&[u32], &[i64])]) -> StuffleExpr {
        let mut e = StuffleExpr::new();
        for (p, c) in items {
            e.add_term(idx(p), EpsPoly::new(c.to_vec()));
        }
        e
    }

    #[test]
    fn depth_one_rule() {
        let got = qstuffle(&idx(&[2]), &idx(&[2]));
        let want = expr(&[(&[4], &[1]), (&[3], &[0, 1]), (&[2, 2], &[2])]);
        assert_eq!(got, want);

        let got = qstuffle(&idx(&[2]), &idx(&[3]));
        let want = expr(&[
            (&[5], &[1]),
            (&[4], &[0, 1]),
            (&[2, 3], &[1]),
            (&[3, 2], &[1]),
        ]);
        assert_eq!(got, want);
    }

    #[test]
    fn ones_collide_into_eps_one() {
        // 1/[k]^2 = q^k/[k]^2 + eps/[k]
        let got = qstuffle(&idx(&[1]), &idx(&[1]));
        assert_eq!(got, expr(&[(&[2], &[1]), (&[1], &[0, 1]), (&[1, 1], &[2])]));
        assert_eq!(got.non_admissible_keys(), vec![&idx(&[1, 1]), &idx(&[1])]);
    }

    #[test]
    fn general_depth_matches_numerics() {
        let qp = QParam::with_tol(0.5, 1e-10).unwrap();
        let a = idx(&[2, 1]);
        let b = idx(&[2]);
        let lhs = eval_expr(&qstuffle(&a, &b), &qp).unwrap();
        let za = eval_qmzv(&a, &qp).unwrap();
        let zb = eval_qmzv(&b, &qp).unwrap();
        let prod = za.product(&zb);
        let budget =
            lhs.tail_bound + prod.tail_bound + za.rounding_bound() + zb.rounding_bound() + 1e-15;
        assert!((lhs.value - prod.value).abs() <= budget);
    }

    #[test]
    fn euler_reduction_shapes() {
        let r2 = reduce_zeta_m1(2).unwrap();
        assert!(r2.products.is_empty());
        assert_eq!(r2.linear, expr(&[(&[3], &[2])]));
        assert!(r2.is_consistent());

        let r3 = reduce_zeta_m1(3).unwrap();
        assert_eq!(r3.products, vec![(2, 2)]);
        assert_eq!(r3.linear, expr(&[(&[4], &[3]), (&[3], &[0, 1])]));
        assert!(r3.is_consistent());

        for m in 2..=10 {
            let r = reduce_zeta_m1(m).unwrap();
            assert!(r.is_consistent(), "m={m}");
            let classical = r.classical_linear();
            assert_eq!(classical.len(), 1);
            assert_eq!(classical[&idx(&[m + 1])], i64::from(m));
        }
        assert!(reduce_zeta_m1(1).is_err());
    }

    #[test]
    fn euler_reduction_numeric_m4() {
        let qp = QParam::with_tol(0.5, 1e-12).unwrap();
        let r = reduce_zeta_m1(4).unwrap();
        let z = |p: &[u32]| eval_qmzv(&idx(p), &qp).unwrap().value;
        let lhs = 2.0 * z(&[4, 1]);
        let rhs = 4.0 * z(&[5]) + 0.5 * 2.0 * z(&[4])
            - r.products
                .iter()
                .map(|&(s, t)| z(&[s]) * z(&[t]))
                .sum::<f64>();
        assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn eval_expr_basics() {
        let qp = QParam::with_tol(0.5, 1e-12).unwrap();
        let v = eval_expr(&expr(&[(&[3], &[1])]), &qp).unwrap();
        assert!((v.value - 0.272_203_205_633_213_67).abs() < 1e-11);
        let empty = eval_expr(&StuffleExpr::new(), &qp).unwrap();
        assert_eq!((empty.value, empty.tail_bound), (0.0, 0.0));
        let bad = expr(&[(&[1, 2], &[1])]);
        assert!(matches!(
            eval_expr(&bad, &qp),
            Err(Error::NonAdmissibleKey(_))
        ));
    }

    #[test]
    fn json_shape_is_canonical() {
        let e = qstuffle(&idx(&[2]), &idx(&[2]));
        assert_eq!(
            e.to_json(),
            r#"{"terms":[{"index":[4],"eps":[1]},{"index":[3],"eps":[0,1]},{"index":[2,2],"eps":[2]}]}"#
        );
        assert_eq!(StuffleExpr::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn json_merges_and_validates() {
        let e = StuffleExpr::from_json(
            r#"{"terms":[{"index":[2],"eps":[1]},{"index":[2],"eps":[-1]},{"index":[3],"eps":[0,2,0]}]}"#,
        )
        .unwrap();
        assert_eq!(e, expr(&[(&[3], &[0, 2])]));
        assert!(StuffleExpr::from_json(r#"{"terms":[{"index":[],"eps":[1]}]}"#).is_err());
        assert!(StuffleExpr::from_json(r#"{"terms":[{"index":[0],"eps":[1]}]}"#).is_err());
        assert!(StuffleExpr::from_json(r#"{"terms":[],"extra":1}"#).is_err());
        let overflow = format!(
            r#"{{"terms":[{{"index":[2],"eps":[{m}]}},{{"index":[2],"eps":[{m}]}}]}}"#,
            m = i64::MAX
        );
        assert!(StuffleExpr::from_json(&overflow).is_err());
    }

    #[test]
    fn eps_poly_display_and_eval() {
        let p = EpsPoly::new(vec![3, -1, 2, 0]);
        assert_eq!(p.coeffs(), &[3, -1, 2]);
        assert_eq!(p.to_string(), "3 - eps + 2eps^2");
        assert_eq!(p.eval(0.5), 3.0 - 0.5 + 0.5);
        assert_eq!(p.eval_abs(0.5), 3.0 + 0.5 + 0.5);
        assert_eq!(EpsPoly::zero().degree(), None);
    }
}
