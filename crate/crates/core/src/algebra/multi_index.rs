//! Exponent tuples `α ∈ N_0^n`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An exponent tuple. Ordered graded-lexicographically: first by total
/// degree, then so that `x1` precedes `x2` among monomials of equal degree
/// (`1, x1, x2, x1², x1x2, x2², ...`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// The `i`-th unit exponent `e_i`.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn univariate(k: u32) -> Self {
        MultiIndex(vec![k])
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `|α| = Σ α_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise order `self ⪯ other`.
    pub fn precedes(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.nvars(), other.nvars(), "multi-index arity mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other`, defined when `other ⪯ self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.precedes(self) {
            return None;
        }
        Some(MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// `α! = Π α_i!`.
    pub fn factorial(&self) -> u64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// `binom(self, sub) = Π binom(self_i, sub_i)`, `None` unless `sub ⪯ self`.
    pub fn binom(&self, sub: &MultiIndex) -> Option<u64> {
        if !sub.precedes(self) {
            return None;
        }
        Some(self.0.iter().zip(&sub.0).map(|(&b, &a)| binomial(b, a)).product())
    }

    /// `Π self_i! / (self_i − k_i)!`, the coefficient produced by `∂^k x^self`;
    /// zero unless `k ⪯ self`.
    pub fn falling_factorial(&self, k: &MultiIndex) -> u64 {
        if !k.precedes(self) {
            return 0;
        }
        self.0
            .iter()
            .zip(&k.0)
            .map(|(&b, &a)| ((b - a + 1)..=b).map(u64::from).product::<u64>())
            .product()
    }

    /// All `α ⪯ self`, in graded-lex order.
    pub fn lower_set(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.nvars()))];
        for &b in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=b).map(move |a| {
                        let mut e = prefix.0.clone();
                        e.push(a);
                        MultiIndex(e)
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    /// All multi-indices in `nvars` variables with `|α| ≤ max_degree`, in
    /// graded-lex order. There are `C(nvars + max_degree, nvars)` of them.
    pub fn all_up_to(nvars: usize, max_degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for deg in 0..=max_degree {
            let mut cur = vec![0u32; nvars];
            compositions(nvars, deg, 0, &mut cur, &mut out);
        }
        out
    }
}

// Emits the compositions of `remaining` into the slots `pos..` with earlier
// slots taking the largest share first, which is graded-lex order.
fn compositions(n: usize, remaining: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if n == 0 {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        cur[pos] = a;
        compositions(n, remaining - a, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

pub fn factorial(k: u32) -> u64 {
    (1..=u64::from(k)).product()
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..u64::from(k)).fold(1u64, |acc, i| acc * (u64::from(n) - i) / (i + 1))
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn graded_lex_order() {
        let all = MultiIndex::all_up_to(2, 2);
        let expected = vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[0, 1]), mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])];
        assert_eq!(all, expected);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, expected);
    }

    #[test]
    fn count_matches_binomial() {
        for n in 1..4 {
            for d in 0..6 {
                assert_eq!(
                    MultiIndex::all_up_to(n, d).len() as u64,
                    binomial(n as u32 + d, n as u32)
                );
            }
        }
    }

    #[test]
    fn partial_order_and_binomials() {
        let b = mi(&[2, 3]);
        assert!(mi(&[1, 3]).precedes(&b));
        assert!(!mi(&[3, 0]).precedes(&b));
        assert_eq!(b.binom(&MultiIndex::zero(2)), Some(1));
        assert_eq!(b.binom(&mi(&[1, 2])), Some(2 * 3));
        assert_eq!(b.binom(&mi(&[3, 0])), None);
        assert_eq!(b.factorial(), 2 * 6);
        assert_eq!(b.falling_factorial(&mi(&[1, 2])), 2 * 6);
        assert_eq!(b.falling_factorial(&mi(&[3, 0])), 0);
        assert_eq!(b.lower_set().len(), 12);
        assert_eq!(b.checked_sub(&mi(&[1, 1])), Some(mi(&[1, 2])));
        assert_eq!(b.checked_sub(&mi(&[0, 4])), None);
    }

    #[test]
    fn display() {
        assert_eq!(mi(&[0, 0]).to_string(), "1");
        assert_eq!(mi(&[2, 1]).to_string(), "x1^2*x2");
    }
}
