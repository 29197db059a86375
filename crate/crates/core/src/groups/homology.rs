//! Second (co)homology of finite groups by linear algebra over Z/p^a.
//!
//! A central extension of G by M = Z/p^a is encoded by edge labels `x_{g,s}` on the
//! right Cayley graph: with lifts `ĝ` and `ŝ` one has `ĝ ŝ = x_{g,s} · (gs)^`. Reading a
//! relator from any start `h` must give the same central element, which is a set of
//! linear constraints. Changing lifts moves `x` by `c(g) - c(gs) + d_s`. The quotient is
//! H²(G, M), and H₂ follows by cancelling Ext(G^ab, M) from the universal coefficient
//! splitting. Classes that restrict trivially to every abelian subgroup are exactly those
//! whose commutator pairing vanishes on commuting pairs; cancelling G^ab from those gives
//! the dual of H₂ / H₂^ab.

use super::{AbelianInvariants, Group, GroupError};
use crate::budget::Budget;
use crate::coeff::arith::{factor, valuation};
use crate::linalg::{kernel_mod, subquotient_invariants, PrimePower};

/// The constraint system for one prime.
pub struct CocycleSystem {
    pub p: u64,
    pub pp: PrimePower,
    n: usize,
    k: usize,
    pub constraints: Vec<Vec<u64>>,
    pub coboundaries: Vec<Vec<u64>>,
    /// `walk[b][a]` is the linear form `t_{w(b)}(a)`.
    walk: Vec<Vec<Vec<u64>>>,
}

impl CocycleSystem {
    pub fn new(g: &Group, p: u64) -> Self {
        let n = g.order();
        let k = g.generators().len();
        let a = valuation(n as u64, p).max(1);
        let pp = PrimePower::new(p, a);
        let m = pp.m;
        let dim = n * k;
        let var = |h: usize, s: usize| h * k + s;
        let words = g.generator_words();

        // walk along w(b) from a, built along the BFS tree
        let mut walk = vec![vec![vec![0u64; dim]; n]; n];
        let mut by_len: Vec<usize> = (0..n).collect();
        by_len.sort_by_key(|&b| words[b].len());
        for &b in &by_len {
            let Some((&last, prefix)) = words[b].split_last() else { continue };
            let pb = prefix.iter().fold(0, |x, &s| g.mul(x, g.generators()[s]));
            for start in 0..n {
                let mut v = walk[pb][start].clone();
                let at = g.mul(start, pb);
                v[var(at, last)] = (v[var(at, last)] + 1) % m;
                walk[b][start] = v;
            }
        }

        let mut constraints = Vec::new();
        for h in 0..n {
            for s in 0..k {
                let gs = g.mul(h, g.generators()[s]);
                let mut tree = words[h].clone();
                tree.push(s);
                if tree == words[gs] {
                    continue;
                }
                // relator w(h) s w(hs)^-1, read from every start
                let read = |start: usize| -> Vec<u64> {
                    let mid = g.mul(start, h);
                    let mut v = walk[h][start].clone();
                    v[var(mid, s)] = (v[var(mid, s)] + 1) % m;
                    for (x, y) in v.iter_mut().zip(&walk[gs][start]) {
                        *x = (*x + m - y) % m;
                    }
                    v
                };
                let base = read(0);
                for start in 1..n {
                    let row: Vec<u64> = read(start).iter().zip(&base).map(|(x, y)| (x + m - y) % m).collect();
                    if row.iter().any(|&x| x != 0) {
                        constraints.push(row);
                    }
                }
            }
        }

        let mut coboundaries = Vec::new();
        for c in 0..n {
            let mut v = vec![0u64; dim];
            for s in 0..k {
                v[var(c, s)] = (v[var(c, s)] + 1) % m;
                let h = g.mul(c, g.inv(g.generators()[s]));
                v[var(h, s)] = (v[var(h, s)] + m - 1) % m;
            }
            coboundaries.push(v);
        }
        for s in 0..k {
            let mut v = vec![0u64; dim];
            for h in 0..n {
                v[var(h, s)] = 1;
            }
            coboundaries.push(v);
        }
        CocycleSystem { p, pp, n, k, constraints, coboundaries, walk }
    }

    pub fn dim(&self) -> usize {
        self.n * self.k
    }

    /// Linear form of the normalized cocycle value `f(a, b)` attached to the lifts along words.
    pub fn cocycle_form(&self, g: &Group, a: usize, b: usize) -> Vec<u64> {
        let m = self.pp.m;
        let ab = g.mul(a, b);
        self.walk[a][0]
            .iter()
            .zip(&self.walk[b][a])
            .zip(&self.walk[ab][0])
            .map(|((x, y), z)| (x + y + m - z) % m)
            .collect()
    }

    /// Values of the cocycle `f(a, b)` for a solution `x`.
    pub fn cocycle_values(&self, g: &Group, x: &[u64]) -> Vec<Vec<u64>> {
        let m = self.pp.m;
        (0..self.n)
            .map(|a| {
                (0..self.n)
                    .map(|b| self.cocycle_form(g, a, b).iter().zip(x).fold(0, |acc, (f, v)| (acc + f * v) % m))
                    .collect()
            })
            .collect()
    }

    /// Rows `f(a,b) - f(b,a)` over commuting pairs.
    fn symmetry_rows(&self, g: &Group) -> Vec<Vec<u64>> {
        let m = self.pp.m;
        let mut rows = Vec::new();
        for a in 1..self.n {
            for b in (a + 1)..self.n {
                if g.mul(a, b) == g.mul(b, a) {
                    let fab = self.cocycle_form(g, a, b);
                    let fba = self.cocycle_form(g, b, a);
                    let row: Vec<u64> = fab.iter().zip(&fba).map(|(x, y)| (x + m - y) % m).collect();
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    pub fn cocycles(&self) -> Vec<Vec<u64>> {
        kernel_mod(&self.constraints, self.dim(), self.pp).0
    }
}

/// p-primary data of H²(G, Z/p^a), H₂(G), H₂^ab(G) and their quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyData {
    pub p: u64,
    pub h2_cohomology: Vec<u32>,
    pub schur: AbelianInvariants,
    pub h2_ab: AbelianInvariants,
    pub quotient: AbelianInvariants,
}

fn check_budget(g: &Group) -> Result<(), GroupError> {
    let bound = Budget::global().homology_order;
    if g.order() > bound {
        return Err(GroupError::BudgetExceeded(format!(
            "homology of a group of order {} (bound {bound})",
            g.order()
        )));
    }
    Ok(())
}

/// Computes the p-primary homology data (no budget check).
pub fn homology_at_prime(g: &Group, p: u64) -> HomologyData {
    let ab_p = g.abelianization().0.p_part(p);
    if g.generators().is_empty() || !(g.order() as u64).is_multiple_of(p) {
        let t = AbelianInvariants::trivial();
        return HomologyData { p, h2_cohomology: vec![], schur: t.clone(), h2_ab: t.clone(), quotient: t };
    }
    let sys = CocycleSystem::new(g, p);
    let dim = sys.dim();
    let z = sys.cocycles();
    let h2 = subquotient_invariants(&z, &sys.coboundaries, dim, sys.pp);
    let h2_inv = AbelianInvariants::from_p_exponents(p, &h2);
    let schur = h2_inv.cancel(&ab_p).expect("Ext(G^ab) is a summand of H²");

    let mut sym = sys.constraints.clone();
    sym.extend(sys.symmetry_rows(g));
    let zs = kernel_mod(&sym, dim, sys.pp).0;
    let k_sym = subquotient_invariants(&zs, &sys.coboundaries, dim, sys.pp);
    let quotient = AbelianInvariants::from_p_exponents(p, &k_sym)
        .cancel(&ab_p)
        .expect("Ext(G^ab) lies in the symmetric classes");
    let mut r = zs;
    r.extend(sys.coboundaries.iter().cloned());
    let h2_ab = AbelianInvariants::from_p_exponents(p, &subquotient_invariants(&z, &r, dim, sys.pp));
    debug_assert_eq!(h2_ab.order() * quotient.order(), schur.order());
    HomologyData { p, h2_cohomology: h2, schur, h2_ab, quotient }
}

fn over_primes(g: &Group, pick: impl Fn(HomologyData) -> AbelianInvariants) -> Result<AbelianInvariants, GroupError> {
    check_budget(g)?;
    let mut acc = AbelianInvariants::trivial();
    for (p, _) in factor(g.order() as u64) {
        acc = acc.product(&pick(homology_at_prime(g, p)));
    }
    Ok(acc)
}

/// H₂(G, Z).
pub fn schur_multiplier(g: &Group) -> Result<AbelianInvariants, GroupError> {
    over_primes(g, |d| d.schur)
}

/// H₂^ab(G): the part of H₂(G) coming from abelian subgroups.
pub fn h2_ab_part(g: &Group) -> Result<AbelianInvariants, GroupError> {
    over_primes(g, |d| d.h2_ab)
}

/// H₂(G)/H₂^ab(G).
pub fn bogomolov_part(g: &Group) -> Result<AbelianInvariants, GroupError> {
    over_primes(g, |d| d.quotient)
}

/// SK₁ of the p-adic group ring of a p-group, as H₂(G)/H₂^ab(G).
pub fn sk1_pgroup(g: &Group, p: u64) -> Result<AbelianInvariants, GroupError> {
    if !g.is_p_group(p) {
        return Err(GroupError::NotAPGroup(g.name().to_string()));
    }
    check_budget(g)?;
    Ok(homology_at_prime(g, p).quotient)
}
