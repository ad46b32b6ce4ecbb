use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent tuple `p = (p_1, ..., p_n)`.
///
/// Ordered graded-lexicographically: total degree first, then entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The `k`-th unit multi-index in dimension `n`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&e| factorial(e)).product()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `(other choose self)`, or `None` unless `self ≤ other`.
    pub fn binomial_in(&self, other: &MultiIndex) -> Option<f64> {
        self.le(other).then(|| {
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&k, &q)| binomial(q, k))
                .product()
        })
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        other
            .le(self)
            .then(|| MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn with(&self, k: usize, value: u32) -> MultiIndex {
        let mut e = self.0.clone();
        e[k] = value;
        MultiIndex(e)
    }

    /// All `k` with `k ≤ self` componentwise, in graded order.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &e in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=e).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        let mut out: Vec<MultiIndex> = out.into_iter().map(MultiIndex).collect();
        out.sort();
        out
    }

    /// All multi-indices of dimension `n` with `|p| ≤ degree`, in graded order.
    pub fn all_up_to(n: usize, degree: u32) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    let used: u32 = prefix.iter().sum();
                    (0..=degree - used).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        let mut out: Vec<MultiIndex> = out.into_iter().map(MultiIndex).collect();
        out.sort();
        out
    }
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
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A monomial key `z^p z̄^q` (or `x^p y^q`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub p: MultiIndex,
    pub q: MultiIndex,
}

impl Mono {
    pub fn new(p: MultiIndex, q: MultiIndex) -> Self {
        Mono { p, q }
    }

    pub fn degree(&self) -> u32 {
        self.p.degree() + self.q.degree()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.p.cmp(&other.p).reverse())
            .then_with(|| self.q.cmp(&other.q).reverse())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub(crate) fn falling(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| f64::from(n - i)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order_and_enumeration() {
        let all = MultiIndex::all_up_to(2, 2);
        let degs: Vec<u32> = all.iter().map(MultiIndex::degree).collect();
        assert_eq!(degs, vec![0, 1, 1, 2, 2, 2]);
        assert_eq!(all[1], MultiIndex::new(vec![1, 0]));
        assert_eq!(MultiIndex::new(vec![2, 1]).below().len(), 6);
    }

    #[test]
    fn binomials() {
        let q = MultiIndex::new(vec![4, 2]);
        let p = MultiIndex::new(vec![2, 1]);
        assert_eq!(p.binomial_in(&q), Some(12.0));
        assert_eq!(q.binomial_in(&p), None);
        assert_eq!(q.factorial(), 48.0);
        assert_eq!(falling(5, 2), 20.0);
    }
}
