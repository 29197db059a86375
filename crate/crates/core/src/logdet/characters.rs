use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::LogDetError;
use crate::budget::Budget;
use crate::coeff::arith::{factor, inv_mod, is_prime, pow_mod};
use crate::coeff::poly::{cyclotomic, euler_phi};
use crate::coeff::{CyclotomicRing, RingElement};
use crate::groups::Group;
use crate::linalg::{kernel_mod, PrimePower};

/// An irreducible complex character; `values[c]` is `χ(c)` as an integer polynomial in
/// `ζ_e` of degree below `φ(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub degree: u64,
    pub values: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub exponent: u64,
    /// `Φ_e`, low degree first.
    pub cyclotomic: Vec<i64>,
    pub characters: Vec<Character>,
    pub class_sizes: Vec<usize>,
    pub inverse_class: Vec<usize>,
    order: usize,
    group_power: Vec<Vec<usize>>,
}

/// Cached character table of `g`.
pub fn character_table(g: &Group) -> Result<Arc<CharacterTable>, LogDetError> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CharacterTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = g.fingerprint();
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(dixon_schneider(g)?);
    cache.lock().unwrap().insert(key, t.clone());
    Ok(t)
}

fn reduce_mod_cyclo(mut a: Vec<i64>, phi: &[i64]) -> Vec<i64> {
    let d = phi.len() - 1;
    for k in (d..a.len()).rev() {
        let t = a[k];
        if t != 0 {
            for (i, &c) in phi.iter().enumerate() {
                a[k - d + i] -= t * c;
            }
        }
    }
    a.resize(d, 0);
    a
}

fn poly_mul(a: &[i64], b: &[i64], phi: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x != 0 {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
    }
    reduce_mod_cyclo(out, phi)
}

fn primitive_root(l: u64) -> u64 {
    let qs: Vec<u64> = factor(l - 1).iter().map(|&(q, _)| q).collect();
    (2..l).find(|&g| qs.iter().all(|&q| pow_mod(g, (l - 1) / q, l) != 1)).unwrap_or(1)
}

fn dixon_schneider(g: &Group) -> Result<CharacterTable, LogDetError> {
    let n = g.order();
    if n > Budget::global().character_order {
        return Err(LogDetError::BudgetExceeded(format!("character table of order {n}")));
    }
    let conj = g.conjugacy();
    let r = conj.classes.len();
    let h = conj.class_sizes.clone();
    let reps = conj.representatives.clone();
    assert_eq!(reps[0], 0, "identity class comes first");
    let e = g.exponent() as u64;
    let phi = cyclotomic(e);
    let inverse_class: Vec<usize> = reps.iter().map(|&x| g.class_of(g.inv(x))).collect();

    let mut l = e + 1;
    while !(is_prime(l) && l * l > 4 * n as u64) {
        l += e;
    }
    let pp = PrimePower::new(l, 1);
    let ze = pow_mod(primitive_root(l), (l - 1) / e, l);

    // c[j][i][k] = #{x ∈ C_i : x^{-1} z_k ∈ C_j}
    let mut c = vec![vec![vec![0u64; r]; r]; r];
    for (k, &z) in reps.iter().enumerate() {
        for x in 0..n {
            let i = g.class_of(x);
            let j = g.class_of(g.mul(g.inv(x), z));
            c[j][i][k] += 1;
        }
    }

    // split F_l^r into common eigenspaces of the class matrices
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect()];
    for mj in c.iter().skip(1) {
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| (0..r).map(|i| (0..r).fold(0, |a, k| (a + mj[i][k] % l * b[k]) % l)).collect())
                .collect();
            let mut found = 0;
            for lam in 0..l {
                // coefficient vectors a with Σ a_t (M b_t − λ b_t) = 0
                let mat: Vec<Vec<u64>> = (0..r)
                    .map(|i| (0..basis.len()).map(|t| (images[t][i] + l - lam * basis[t][i] % l) % l).collect())
                    .collect();
                let (ker, _) = kernel_mod(&mat, basis.len(), pp);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                next.push(
                    ker.iter()
                        .map(|a| (0..r).map(|i| a.iter().zip(&basis).fold(0, |s, (&x, b)| (s + x * b[i]) % l)).collect())
                        .collect(),
                );
                if found == basis.len() {
                    break;
                }
            }
            if found != basis.len() {
                return Err(LogDetError::Domain("class matrices are not diagonalizable mod ℓ".into()));
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(LogDetError::Domain("eigenspaces did not separate the characters".into()));
    }

    let mut characters = Vec::with_capacity(r);
    for space in &spaces {
        let w0 = space[0][0];
        let w0inv = inv_mod(w0, l).ok_or_else(|| LogDetError::Domain("eigenvector vanishes at the identity".into()))?;
        let w: Vec<u64> = space[0].iter().map(|&x| x * w0inv % l).collect();
        let sum = (0..r).fold(0u64, |a, k| (a + w[k] * w[inverse_class[k]] % l * inv_mod(h[k] as u64 % l, l).unwrap()) % l);
        let d2 = (n as u64 % l) * inv_mod(sum, l).ok_or_else(|| LogDetError::Domain("degenerate norm".into()))? % l;
        let d = (1..=l / 2).find(|&t| t * t % l == d2).ok_or_else(|| LogDetError::Domain("no degree".into()))?;
        let modl: Vec<u64> = (0..r).map(|k| d * w[k] % l * inv_mod(h[k] as u64 % l, l).unwrap() % l).collect();
        let mut values = Vec::with_capacity(r);
        for &x in reps.iter() {
            let o = g.element_order(x) as u64;
            let zo = pow_mod(ze, e / o, l);
            let oinv = inv_mod(o % l, l).unwrap();
            let mut poly = vec![0i64; e as usize];
            for t in 0..o {
                let mut m = 0u64;
                for j in 0..o {
                    let cj = g.class_of(g.pow(x, j as i64));
                    let z = pow_mod(zo, (l - 1 - (j * t) % (l - 1)) % (l - 1), l);
                    m = (m + modl[cj] * z) % l;
                }
                m = m * oinv % l;
                if m > d {
                    return Err(LogDetError::Domain("eigenvalue multiplicity exceeds the degree".into()));
                }
                poly[(t * (e / o)) as usize] += m as i64;
            }
            values.push(reduce_mod_cyclo(poly, &phi));
        }
        characters.push(Character { degree: d, values });
    }
    characters.sort_by(|a, b| {
        let triv_a = a.values.iter().all(|v| is_one(v));
        let triv_b = b.values.iter().all(|v| is_one(v));
        triv_b.cmp(&triv_a).then(a.degree.cmp(&b.degree)).then(a.values.cmp(&b.values))
    });
    let group_power = (0..n).map(|x| (0..g.element_order(x)).map(|k| g.pow(x, k as i64)).collect()).collect();
    let table = CharacterTable {
        exponent: e,
        cyclotomic: phi,
        characters,
        class_sizes: h,
        inverse_class,
        order: n,
        group_power,
    };
    table.verify_orthogonality()?;
    Ok(table)
}

fn is_one(v: &[i64]) -> bool {
    v.first() == Some(&1) && v[1..].iter().all(|&x| x == 0)
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn phi_e(&self) -> usize {
        euler_phi(self.exponent) as usize
    }

    pub(crate) fn mul_poly(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        poly_mul(a, b, &self.cyclotomic)
    }

    /// `Σ_c |c| χ_i(c) χ_j(c̄) = |G| δ_ij`, exactly in `Z[ζ_e]`.
    pub fn verify_orthogonality(&self) -> Result<(), LogDetError> {
        let r = self.len();
        if r != self.class_sizes.len() {
            return Err(LogDetError::Domain("character count differs from class count".into()));
        }
        for i in 0..r {
            for j in 0..r {
                let ip = self.inner_product_scaled(&self.characters[i].values, j);
                let expect = if i == j { self.order as i64 } else { 0 };
                if ip[0] != expect || ip[1..].iter().any(|&x| x != 0) {
                    return Err(LogDetError::Domain(format!("orthogonality fails for characters {i}, {j}")));
                }
            }
        }
        Ok(())
    }

    /// `|G|·⟨f, χ_j⟩` for a class function `f` given by its values.
    fn inner_product_scaled(&self, f: &[Vec<i64>], j: usize) -> Vec<i64> {
        let mut acc = vec![0i64; self.phi_e()];
        for (k, fk) in f.iter().enumerate() {
            let prod = self.mul_poly(fk, &self.characters[j].values[self.inverse_class[k]]);
            for (a, b) in acc.iter_mut().zip(prod) {
                *a += b * self.class_sizes[k] as i64;
            }
        }
        acc
    }

    /// `ψ^k χ_i = Σ_j A_ij χ_j` with `(ψ^k χ)(g) = χ(g^k)`.
    pub fn adams_matrix(&self, power_map: &[usize]) -> Result<Vec<Vec<i64>>, LogDetError> {
        let r = self.len();
        let mut a = vec![vec![0i64; r]; r];
        for i in 0..r {
            let f: Vec<Vec<i64>> = (0..r).map(|k| self.characters[i].values[power_map[k]].clone()).collect();
            for j in 0..r {
                let ip = self.inner_product_scaled(&f, j);
                if ip[1..].iter().any(|&x| x != 0) || ip[0] % self.order as i64 != 0 {
                    return Err(LogDetError::Domain("Adams operation is not a virtual character".into()));
                }
                a[i][j] = ip[0] / self.order as i64;
            }
        }
        Ok(a)
    }

    /// Index of `c ↦ χ_i(c^a)`, the Galois conjugate `σ_a χ_i`.
    pub fn galois_conjugate(&self, i: usize, power_map: &[usize]) -> Result<usize, LogDetError> {
        let target: Vec<&Vec<i64>> = power_map.iter().map(|&k| &self.characters[i].values[k]).collect();
        self.characters
            .iter()
            .position(|c| c.values.iter().zip(&target).all(|(a, b)| a == *b))
            .ok_or_else(|| LogDetError::Domain("power map does not permute characters".into()))
    }

    /// `χ_i(c)` in a value ring containing `ζ_e`.
    pub fn value(&self, vr: &CyclotomicRing, i: usize, c: usize) -> RingElement {
        vr.eval_zeta_poly(&self.characters[i].values[c])
    }

    /// Classes of `x^k`, `k = 0..ord(x)`, for a group element `x`.
    pub(crate) fn power_classes(&self, g: &Group, x: usize) -> Vec<usize> {
        self.group_power[x].iter().map(|&y| g.class_of(y)).collect()
    }
}
