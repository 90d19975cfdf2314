//! Multi-indices and the compositions that index the sum formula and the
//! weight/depth/height strata.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered tuple `(n1, ..., nr)` of positive integers, `r >= 1`.
///
/// Ordering is lexicographic on the parts; canonical listings in this crate
/// run in *descending* order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidIndex("depth must be at least 1".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidIndex(format!(
                "parts must be positive: {parts:?}"
            )));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&n| u64::from(n)).sum()
    }

    pub fn height(&self) -> usize {
        self.0.iter().filter(|&&n| n > 1).count()
    }

    /// Leading exponent at least 2, which is what convergence of `zeta[idx]`
    /// requires.
    pub fn is_admissible(&self) -> bool {
        self.0[0] >= 2
    }

    /// `(n1 + 1, n2, ..., nr)`: the index whose zeta value is `zeta*[self]`.
    pub fn shifted(&self) -> Self {
        let mut parts = self.0.clone();
        parts[0] += 1;
        Self(parts)
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }
}

impl TryFrom<Vec<u32>> for MultiIndex {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<MultiIndex> for Vec<u32> {
    fn from(idx: MultiIndex) -> Self {
        idx.0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("]")
    }
}

/// Weight, depth and height of a multi-index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexClass {
    pub weight: u64,
    pub depth: usize,
    pub height: usize,
}

pub fn classify(idx: &MultiIndex) -> IndexClass {
    IndexClass {
        weight: idx.weight(),
        depth: idx.depth(),
        height: idx.height(),
    }
}

/// Lazily yields every composition of `total` into `parts` positive parts in
/// descending lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let out = self.current.take()?;
        self.current = successor(&out);
        Some(MultiIndex(out))
    }
}

// Next composition in descending lex order: lower the rightmost non-final part
// that exceeds 1 and pack the freed mass into the position after it.
fn successor(c: &[u32]) -> Option<Vec<u32>> {
    let r = c.len();
    if r < 2 {
        return None;
    }
    let i = (0..r - 1).rev().find(|&i| c[i] > 1)?;
    let mut next = c.to_vec();
    next[i] -= 1;
    let tail: u32 = c[i + 1..].iter().sum::<u32>() + 1;
    let ones = (r - i - 2) as u32;
    next[i + 1] = tail - ones;
    for slot in &mut next[i + 2..] {
        *slot = 1;
    }
    Some(next)
}

/// Compositions of `total` into `parts` positive parts; empty when
/// `total < parts` or `parts == 0`.
pub fn compositions(total: u32, parts: u32) -> Compositions {
    let current = (parts >= 1 && total >= parts).then(|| {
        let mut c = vec![1u32; parts as usize];
        c[0] = total - parts + 1;
        c
    });
    Compositions { current }
}

/// Admissible multi-indices of the given weight, depth and height, in
/// descending lexicographic order.
pub fn enumerate_i0(weight: u32, depth: u32, height: u32) -> impl Iterator<Item = MultiIndex> {
    compositions(weight, depth)
        .filter(move |idx| idx.is_admissible() && idx.height() == height as usize)
}

/// `(m + 2, 1, ..., 1)` with `n` trailing ones.
pub fn ones_padded(m: u32, n: u32) -> MultiIndex {
    let mut parts = Vec::with_capacity(n as usize + 1);
    parts.push(m + 2);
    parts.extend(std::iter::repeat_n(1, n as usize));
    MultiIndex(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(p: &[u32]) -> MultiIndex {
        MultiIndex::new(p.to_vec()).unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn compositions_of_four_into_two() {
        let got: Vec<_> = compositions(4, 2).collect();
        assert_eq!(got, vec![idx(&[3, 1]), idx(&[2, 2]), idx(&[1, 3])]);
    }

    #[test]
    fn compositions_single_part_and_empty() {
        assert_eq!(compositions(7, 1).collect::<Vec<_>>(), vec![idx(&[7])]);
        assert_eq!(compositions(2, 3).count(), 0);
        assert_eq!(compositions(3, 0).count(), 0);
    }

    #[test]
    fn compositions_five_into_three() {
        let got: Vec<_> = compositions(5, 3).map(MultiIndex::into_parts).collect();
        assert_eq!(
            got,
            vec![
                vec![3, 1, 1],
                vec![2, 2, 1],
                vec![2, 1, 2],
                vec![1, 3, 1],
                vec![1, 2, 2],
                vec![1, 1, 3]
            ]
        );
    }

    // Independent oracle: brute force over the box [1, N]^r.
    fn brute_compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![1u32; parts as usize];
        loop {
            if cur.iter().sum::<u32>() == total {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == cur.len() {
                    out.sort_by(|a, b| b.cmp(a));
                    return out;
                }
                if cur[i] < total {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn compositions_counts_match_binomial_exhaustively() {
        for n in 1..=12u32 {
            for r in 1..=n {
                let got: Vec<_> = compositions(n, r).collect();
                assert_eq!(got.len() as u64, binom(u64::from(n - 1), u64::from(r - 1)));
                assert!(got.windows(2).all(|w| w[0] > w[1]), "order n={n} r={r}");
                assert!(got
                    .iter()
                    .all(|c| c.weight() == u64::from(n) && c.depth() == r as usize));
                if n <= 7 {
                    let brute = brute_compositions(n, r);
                    let parts: Vec<_> = got.into_iter().map(MultiIndex::into_parts).collect();
                    assert_eq!(parts, brute);
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify(&idx(&[3, 1]));
        assert_eq!((c.weight, c.depth, c.height), (4, 2, 1));
        let c = classify(&idx(&[2, 2]));
        assert_eq!((c.weight, c.depth, c.height), (4, 2, 2));
        for m in 0..4 {
            for n in 0..4 {
                let c = classify(&ones_padded(m, n));
                assert_eq!(c.weight, u64::from(m + n + 2));
                assert_eq!(c.depth, n as usize + 1);
                assert_eq!(c.height, 1);
            }
        }
    }

    #[test]
    fn i0_examples() {
        assert_eq!(
            enumerate_i0(4, 2, 1).collect::<Vec<_>>(),
            vec![idx(&[3, 1])]
        );
        assert_eq!(enumerate_i0(3, 1, 1).collect::<Vec<_>>(), vec![idx(&[3])]);
        assert_eq!(
            enumerate_i0(4, 2, 2).collect::<Vec<_>>(),
            vec![idx(&[2, 2])]
        );
        assert_eq!(enumerate_i0(3, 3, 1).count(), 0);
        assert_eq!(enumerate_i0(4, 2, 0).count(), 0);
    }

    #[test]
    fn i0_strata_partition_admissible_compositions() {
        for n in 1..=10u32 {
            for r in 1..=n {
                let admissible = compositions(n, r).filter(MultiIndex::is_admissible).count();
                let strata: usize = (0..=r).map(|s| enumerate_i0(n, r, s).count()).sum();
                assert_eq!(admissible, strata, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn ones_padded_examples() {
        assert_eq!(ones_padded(0, 0), idx(&[2]));
        assert_eq!(ones_padded(1, 2), idx(&[3, 1, 1]));
        assert_eq!(ones_padded(0, 1), idx(&[2, 1]));
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(MultiIndex::new(vec![]).is_err());
        assert!(MultiIndex::new(vec![2, 0]).is_err());
        assert!(serde_json::from_str::<MultiIndex>("[0]").is_err());
        assert_eq!(
            serde_json::from_str::<MultiIndex>("[2,1]").unwrap(),
            idx(&[2, 1])
        );
    }

    #[test]
    fn display_and_shift() {
        assert_eq!(idx(&[3, 1, 1]).to_string(), "[3,1,1]");
        assert_eq!(idx(&[1, 2]).shifted(), idx(&[2, 2]));
        assert!(!idx(&[1, 2]).is_admissible());
    }
}
