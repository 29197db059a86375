use std::fmt;

use serde::Serialize;

use super::Group;
use crate::coeff::arith::{factor, gcd, ipow};

/// A finite abelian group `Z/d_1 × ... × Z/d_k` with `d_1 | d_2 | ... | d_k`, all `d_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct AbelianInvariants {
    pub divisors: Vec<u64>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Normalizes any list of cyclic orders into a divisibility chain.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut primary = Vec::new();
        for &d in orders {
            assert!(d > 0, "cyclic order must be positive");
            for (p, e) in factor(d) {
                primary.push((p, e));
            }
        }
        Self::from_primary(&primary)
    }

    /// From prime-power factors `(p, e)` meaning `Z/p^e`.
    pub fn from_primary(parts: &[(u64, u32)]) -> Self {
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for &(p, e) in parts {
            if e > 0 {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let k = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut divisors = vec![1u64; k];
        for (p, mut es) in by_prime {
            es.sort_unstable();
            let off = k - es.len();
            for (i, e) in es.into_iter().enumerate() {
                divisors[off + i] *= ipow(p, e);
            }
        }
        AbelianInvariants { divisors }
    }

    /// From exponents of a single prime.
    pub fn from_p_exponents(p: u64, exps: &[u32]) -> Self {
        Self::from_primary(&exps.iter().map(|&e| (p, e)).collect::<Vec<_>>())
    }

    /// Invariants of an abelian group given by its table, by counting `|A[p^k]|`.
    pub fn of_abelian_group(a: &Group) -> Self {
        let n = a.order() as u64;
        let mut parts = Vec::new();
        for (p, e) in factor(n) {
            // layers[k] = log_p |A[p^k]|
            let mut layers = vec![0u32];
            for k in 1..=e {
                let pk = ipow(p, k) as i64;
                let c = (0..a.order()).filter(|&x| a.pow(x, pk) == 0).count() as u64;
                layers.push(crate::coeff::arith::valuation(c, p));
            }
            // number of cyclic factors of exponent >= k is layers[k] - layers[k-1]
            for k in 1..=e as usize {
                let ge_k = layers[k] - layers[k - 1];
                let ge_next = if k < e as usize { layers[k + 1] - layers[k] } else { 0 };
                for _ in 0..ge_k - ge_next {
                    parts.push((p, k as u32));
                }
            }
        }
        Self::from_primary(&parts)
    }

    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Prime-power decomposition `(p, e)`, sorted.
    pub fn primary(&self) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = self.divisors.iter().flat_map(|&d| factor(d)).collect();
        out.sort_unstable();
        out
    }

    /// Exponents of the p-primary part, ascending.
    pub fn p_exponents(&self, p: u64) -> Vec<u32> {
        self.primary().into_iter().filter(|&(q, _)| q == p).map(|(_, e)| e).collect()
    }

    pub fn p_part(&self, p: u64) -> Self {
        Self::from_p_exponents(p, &self.p_exponents(p))
    }

    /// `A[m] = {a : m·a = 0}`.
    pub fn torsion(&self, m: u64) -> Self {
        Self::from_cyclic_orders(&self.divisors.iter().map(|&d| gcd(d, m)).collect::<Vec<_>>())
    }

    /// `A/mA`.
    pub fn quotient(&self, m: u64) -> Self {
        self.torsion(m)
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut all = self.divisors.clone();
        all.extend(&other.divisors);
        Self::from_cyclic_orders(&all)
    }

    /// Removes the cyclic factors of `other` from `self` (multiset difference of
    /// primary parts). Returns `None` if `other` is not contained as a summand.
    pub fn cancel(&self, other: &Self) -> Option<Self> {
        let mut mine = self.primary();
        for f in other.primary() {
            let i = mine.iter().position(|&x| x == f)?;
            mine.remove(i);
        }
        Some(Self::from_primary(&mine))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.divisors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.divisors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}
