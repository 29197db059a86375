//! Finite groups given by multiplication tables, with conjugacy data, abelianization,
//! power maps and the homological invariants behind SK1 of p-groups.

mod catalog;
mod homology;
mod invariants;
mod todd_coxeter;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

pub use catalog::{catalog_names, catalog_p_groups, group_by_name};
pub use homology::{
    bogomolov_part, h2_ab_part, homology_at_prime, schur_multiplier, sk1_pgroup, CocycleSystem, HomologyData,
};
pub use invariants::AbelianInvariants;
pub use todd_coxeter::Presentation;

use crate::coeff::arith::{factor, gcd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("coset enumeration exceeded the bound of {0} cosets")]
    EnumerationBudgetExceeded(usize),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("bad presentation: {0}")]
    BadPresentation(String),
    #[error("element is not central of order p")]
    NotCentral,
    #[error("{0} is not a p-group")]
    NotAPGroup(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// Partition of the elements into conjugacy classes. Class 0 is the identity; classes
/// are ordered by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyData {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub representatives: Vec<usize>,
}

/// A finite group on elements `0..n` with identity 0.
#[derive(Clone)]
pub struct Group {
    name: String,
    n: usize,
    table: Vec<u32>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    conj: ConjugacyData,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({}, order {})", self.name, self.n)
    }
}

impl Group {
    /// Builds and verifies a group from a row-major table with identity at index 0.
    /// Associativity is checked exhaustively up to order 256 and on a sample above.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Group, GroupError> {
        Self::from_table_named("G", table, None)
    }

    pub(crate) fn from_table_named(
        name: &str,
        rows: Vec<Vec<usize>>,
        gens: Option<(Vec<usize>, Vec<String>)>,
    ) -> Result<Group, GroupError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::NotAGroup("table must be square and nonempty".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row[0] != i || rows[0][i] != i {
                return Err(GroupError::NotAGroup("element 0 is not the identity".into()));
            }
            let distinct: BTreeSet<_> = row.iter().collect();
            if distinct.len() != n {
                return Err(GroupError::NotAGroup(format!("row {i} is not a permutation")));
            }
        }
        let table: Vec<u32> = rows.iter().flatten().map(|&x| x as u32).collect();
        let m = |a: usize, b: usize| table[a * n + b] as usize;
        let check = |a: usize, b: usize, c: usize| m(m(a, b), c) == m(a, m(b, c));
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(GroupError::NotAGroup(format!("({a}{b}){c} ≠ {a}({b}{c})")));
                        }
                    }
                }
            }
        } else {
            for t in 0..20_000usize {
                let (a, b, c) = ((t * 7919) % n, (t * 104_729 + 1) % n, (t * 1_299_709 + 2) % n);
                if !check(a, b, c) {
                    return Err(GroupError::NotAGroup("associativity fails".into()));
                }
            }
        }
        let inverses: Vec<usize> = (0..n).map(|a| (0..n).find(|&b| m(a, b) == 0).unwrap()).collect();
        let orders: Vec<usize> = (0..n)
            .map(|a| {
                let mut x = a;
                let mut k = 1;
                while x != 0 {
                    x = m(x, a);
                    k += 1;
                }
                k
            })
            .collect();
        let mut g = Group {
            name: name.to_string(),
            n,
            table,
            inverses,
            orders,
            generators: vec![],
            generator_names: vec![],
            conj: ConjugacyData { classes: vec![], class_of: vec![], class_sizes: vec![], representatives: vec![] },
        };
        g.conj = g.compute_classes();
        match gens {
            Some((gs, names)) => {
                g.generators = gs;
                g.generator_names = names;
            }
            None => {
                g.generators = g.greedy_generators();
                g.generator_names = (0..g.generators.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
            }
        }
        if g.subgroup_generated(&g.generators).len() != n {
            return Err(GroupError::NotAGroup("generators do not generate".into()));
        }
        Ok(g)
    }

    /// Coset enumeration of the presentation, followed by table verification.
    pub fn from_presentation(pres: &Presentation, bound: usize) -> Result<Group, GroupError> {
        Self::from_presentation_named("G", pres, bound)
    }

    pub(crate) fn from_presentation_named(name: &str, pres: &Presentation, bound: usize) -> Result<Group, GroupError> {
        let (act, n) = todd_coxeter::enumerate(pres, bound)?;
        let k = pres.gen_names.len();
        // BFS tree: every element is parent * generator
        let mut parent = vec![(usize::MAX, 0usize); n];
        let mut order = vec![0usize];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut q = VecDeque::from([0usize]);
        while let Some(c) = q.pop_front() {
            for g in 0..k {
                let d = act[c][g];
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = (c, g);
                    order.push(d);
                    q.push_back(d);
                }
            }
        }
        if order.len() != n {
            return Err(GroupError::NotAGroup("coset graph is disconnected".into()));
        }
        let mut rows = vec![vec![0usize; n]; n];
        for c in 0..n {
            rows[c][0] = c;
            for &d in order.iter().skip(1) {
                let (pd, g) = parent[d];
                rows[c][d] = act[rows[c][pd]][g];
            }
        }
        let gens: Vec<usize> = (0..k).map(|g| act[0][g]).collect();
        Self::from_table_named(name, rows, Some((gens, pres.gen_names.clone())))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let k = k.rem_euclid(o);
        (0..k).fold(0, |x, _| self.mul(x, a))
    }

    pub fn conj(&self, x: usize, g: usize) -> usize {
        // x g x^-1
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    /// Hash of the multiplication table, used to key caches.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.table.hash(&mut h);
        h.finish()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |acc, &o| acc / gcd(acc as u64, o as u64) as usize * o)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The prime `p` when the order is a power of `p` (`None` for the trivial group).
    pub fn prime_of_p_group(&self) -> Option<u64> {
        let f = factor(self.n as u64);
        (f.len() == 1).then(|| f[0].0)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.n == 1 || self.prime_of_p_group() == Some(p)
    }

    pub fn conjugacy(&self) -> &ConjugacyData {
        &self.conj
    }

    pub fn num_classes(&self) -> usize {
        self.conj.classes.len()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.conj.class_of[g]
    }

    fn compute_classes(&self) -> ConjugacyData {
        let n = self.n;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let mut cls: Vec<usize> = (0..n).map(|x| self.conj(x, g)).collect::<BTreeSet<_>>().into_iter().collect();
            cls.sort_unstable();
            for &h in &cls {
                class_of[h] = idx;
            }
            classes.push(cls);
        }
        let class_sizes = classes.iter().map(Vec::len).collect();
        let representatives = classes.iter().map(|c| c[0]).collect();
        ConjugacyData { classes, class_of, class_sizes, representatives }
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0];
        let mut q = VecDeque::from([0usize]);
        while let Some(x) = q.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    q.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        // prefer elements of large order
        let mut cand: Vec<usize> = (1..self.n).collect();
        cand.sort_by_key(|&g| (std::cmp::Reverse(self.orders[g]), g));
        for g in cand {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.subgroup_generated(&gens);
                if span.len() == self.n {
                    break;
                }
            }
        }
        gens
    }

    /// A word in the generators for every element (breadth-first, shortest).
    pub fn generator_words(&self) -> Vec<Vec<usize>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.n];
        words[0] = Some(vec![]);
        let mut q = VecDeque::from([0usize]);
        while let Some(x) = q.pop_front() {
            for (i, &g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(i);
                    words[y] = Some(w);
                    q.push_back(y);
                }
            }
        }
        words.into_iter().map(Option::unwrap).collect()
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.n).filter(|&x| self.mul(x, g) == self.mul(g, x)).collect()
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.conj.class_sizes[self.conj.class_of[x]] == 1).collect()
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let comms: BTreeSet<usize> =
            (0..self.n).flat_map(|a| (0..self.n).map(move |b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        let comms: Vec<usize> = comms.into_iter().collect();
        self.subgroup_generated(&comms)
    }

    /// `G/N` for a normal subgroup given by its sorted elements, with the projection.
    pub fn quotient(&self, normal: &[usize]) -> Result<(Group, Vec<usize>), GroupError> {
        let mut coset_of = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            for &h in normal {
                coset_of[self.mul(g, h)] = idx;
            }
            reps.push(g);
        }
        let k = reps.len();
        let rows: Vec<Vec<usize>> =
            (0..k).map(|i| (0..k).map(|j| coset_of[self.mul(reps[i], reps[j])]).collect()).collect();
        for a in 0..self.n {
            for &h in normal {
                if coset_of[self.conj(a, h)] != 0 {
                    return Err(GroupError::NotAGroup("subgroup is not normal".into()));
                }
            }
        }
        let gens: Vec<usize> = self.generators.iter().map(|&g| coset_of[g]).collect();
        let names = self.generator_names.clone();
        let q = Group::from_table_named(&format!("{}/N", self.name), rows, Some((gens, names)))?;
        Ok((q, coset_of))
    }

    /// `G^{ab}` with its invariants and the projection `G → G^{ab}`.
    pub fn abelianization(&self) -> (AbelianInvariants, Group, Vec<usize>) {
        let d = self.derived_subgroup();
        let (q, proj) = self.quotient(&d).expect("derived subgroup is normal");
        (AbelianInvariants::of_abelian_group(&q), q, proj)
    }

    /// Classes of elements of order prime to `p`.
    pub fn p_regular_classes(&self, p: u64) -> Vec<usize> {
        (0..self.num_classes())
            .filter(|&c| !(self.orders[self.conj.representatives[c]] as u64).is_multiple_of(p))
            .collect()
    }

    /// `[g] ↦ [g^k]`.
    pub fn power_map_on_classes(&self, k: i64) -> Vec<usize> {
        self.conj.representatives.iter().map(|&g| self.class_of(self.pow(g, k))).collect()
    }

    pub fn central_order_p_element(&self, p: u64) -> Option<usize> {
        self.center().into_iter().find(|&z| self.orders[z] as u64 == p)
    }

    /// `Ω = {g : g is conjugate to zg}` for central `z` of order p.
    pub fn omega_set(&self, z: usize, p: u64) -> Result<Vec<usize>, GroupError> {
        if self.orders[z] as u64 != p || self.conj.class_sizes[self.class_of(z)] != 1 {
            return Err(GroupError::NotCentral);
        }
        Ok((0..self.n).filter(|&g| self.class_of(self.mul(z, g)) == self.class_of(g)).collect())
    }

    /// K-conjugacy data for the unramified extension of Q_p of degree `f`: each p-regular
    /// element is fused with its powers `g^a`, `a ∈ <p^f mod ord(g)>`.
    pub fn k_conjugacy_bookkeeping(&self, p: u64, f: u32) -> Vec<KConjugacyClass> {
        let mut done = vec![false; self.num_classes()];
        let mut out = Vec::new();
        for c in self.p_regular_classes(p) {
            if done[c] {
                continue;
            }
            let g = self.conj.representatives[c];
            let ord = self.orders[g] as u64;
            let mut galois = vec![1u64 % ord.max(1)];
            let q = crate::coeff::arith::pow_mod(p, f as u64, ord.max(1));
            let mut a = q;
            while ord > 1 && !galois.contains(&a) {
                galois.push(a);
                a = a * q % ord;
            }
            let fused: BTreeSet<usize> = galois.iter().map(|&a| self.class_of(self.pow(g, a as i64))).collect();
            for &fc in &fused {
                done[fc] = true;
            }
            let powers: BTreeSet<usize> = galois.iter().map(|&a| self.pow(g, a as i64)).collect();
            let normalizer: Vec<usize> = (0..self.n).filter(|&x| powers.contains(&self.conj(x, g))).collect();
            out.push(KConjugacyClass {
                representative: g,
                fused_classes: fused.into_iter().collect(),
                galois_exponents: galois,
                normalizer,
                centralizer: self.centralizer(g),
            });
        }
        out
    }

    /// All elements of the direct product `self × other`, indexed `a * |other| + b`.
    pub fn direct_product(&self, other: &Group) -> Group {
        let (n, m) = (self.n, other.n);
        let rows: Vec<Vec<usize>> = (0..n * m)
            .map(|x| (0..n * m).map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m)).collect())
            .collect();
        let mut gens: Vec<usize> = self.generators.iter().map(|&g| g * m).collect();
        gens.extend(other.generators.iter().copied());
        let names = (0..gens.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        Group::from_table_named(&format!("{}x{}", self.name, other.name), rows, Some((gens, names)))
            .expect("direct products are groups")
    }
}

/// One K-conjugacy class of p-regular elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KConjugacyClass {
    pub representative: usize,
    pub fused_classes: Vec<usize>,
    pub galois_exponents: Vec<u64>,
    /// `N_i = {x : x g x^-1 = g^a for some admissible a}`
    pub normalizer: Vec<usize>,
    /// `Z_i = C_G(g)`
    pub centralizer: Vec<usize>,
}

#[cfg(test)]
mod tests;
