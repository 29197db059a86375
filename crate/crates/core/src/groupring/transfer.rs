use std::sync::Arc;

use super::{GroupRingElement, GroupRingError};
use crate::coeff::{CoeffError, CoeffRing, RingElement};
use crate::groups::Group;
use crate::linalg::{inverse_mod, rank_mod_p, PrimePower};

/// Square matrix over `O[G]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    pub size: usize,
    pub entries: Vec<Vec<GroupRingElement>>,
}

impl GroupRingMatrix {
    pub fn new(entries: Vec<Vec<GroupRingElement>>) -> Result<Self, GroupRingError> {
        let size = entries.len();
        if size == 0 || entries.iter().any(|r| r.len() != size) {
            return Err(GroupRingError::Mismatch);
        }
        let r0 = &entries[0][0];
        if entries.iter().flatten().any(|x| x.ring() != r0.ring() || !super::element::same_group(x.group(), r0.group())) {
            return Err(GroupRingError::Mismatch);
        }
        Ok(GroupRingMatrix { size, entries })
    }

    pub fn identity(ring: &CoeffRing, group: &Arc<Group>, size: usize) -> Self {
        let entries = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| if i == j { GroupRingElement::one(ring, group) } else { GroupRingElement::zero(ring, group) })
                    .collect()
            })
            .collect();
        GroupRingMatrix { size, entries }
    }

    pub fn ring(&self) -> &CoeffRing {
        self.entries[0][0].ring()
    }

    pub fn group(&self) -> &Arc<Group> {
        self.entries[0][0].group()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let n = self.size;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(GroupRingElement::zero(self.ring(), self.group()), |acc, k| {
                            acc.add(&self.entries[i][k].mul(&other.entries[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        GroupRingMatrix { size: n, entries }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.ring(), self.group(), self.size);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> GroupRingElement {
        (0..self.size).fold(GroupRingElement::zero(self.ring(), self.group()), |acc, i| acc.add(&self.entries[i][i]))
    }

    /// Laplace expansion; only meaningful when `O[G]` is commutative.
    pub fn determinant_commutative(&self) -> Result<GroupRingElement, GroupRingError> {
        if !self.group().is_abelian() {
            return Err(GroupRingError::Domain("determinant needs a commutative group ring".into()));
        }
        Ok(laplace(&self.entries))
    }
}

fn laplace(m: &[Vec<GroupRingElement>]) -> GroupRingElement {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = GroupRingElement::zero(m[0][0].ring(), m[0][0].group());
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<GroupRingElement>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
        let t = m[0][j].mul(&laplace(&minor));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// Coefficientwise inclusion `R[G] → S[G]`.
pub fn i_star(x: &GroupRingElement, target: &CoeffRing) -> Result<GroupRingElement, GroupRingError> {
    x.embed_into(target)
}

fn unit_vector(ring: &CoeffRing, k: usize) -> RingElement {
    let mut c = vec![0u64; ring.degree()];
    c[k] = 1;
    ring.element(&c).unwrap()
}

/// The `Z/p^N`-matrix whose column `(i, k)` is `e_k · b_i`, with `e_k` the standard basis of `R`.
fn basis_matrix(r: &CoeffRing, s: &CoeffRing, basis: &[RingElement]) -> Result<Vec<Vec<u64>>, GroupRingError> {
    let ds = s.degree();
    let mut cols = Vec::with_capacity(ds);
    for b in basis {
        for k in 0..r.degree() {
            cols.push(s.embed(&unit_vector(r, k))?.mul(b).coeffs().to_vec());
        }
    }
    if cols.len() != ds {
        return Err(GroupRingError::Mismatch);
    }
    Ok((0..ds).map(|row| cols.iter().map(|c| c[row]).collect()).collect())
}

fn relative_degree(r: &CoeffRing, s: &CoeffRing) -> Result<usize, GroupRingError> {
    if r.p() != s.p() || r.precision() != s.precision() || !s.degree().is_multiple_of(r.degree()) {
        return Err(CoeffError::NoEmbedding(format!("{r:?} into {s:?}")).into());
    }
    // probes the registered embedding
    s.embed(&r.generator())?;
    Ok(s.degree() / r.degree())
}

/// `1, θ, …, θ^{n−1}` for the generator `θ` of `S` when it is an `R`-basis; otherwise
/// standard basis vectors of `S` chosen greedily.
pub fn default_basis(r: &CoeffRing, s: &CoeffRing) -> Result<Vec<RingElement>, GroupRingError> {
    let n = relative_degree(r, s)?;
    let p = s.p();
    let theta = s.generator();
    let power: Vec<RingElement> = (0..n).map(|i| theta.pow(i as u128)).collect();
    if rank_mod_p(&basis_matrix(r, s, &power)?, s.degree(), p) == s.degree() {
        return Ok(power);
    }
    let mut chosen: Vec<RingElement> = Vec::new();
    for k in 0..s.degree() {
        let cand = unit_vector(s, k);
        let mut trial = chosen.clone();
        trial.push(cand.clone());
        let mut cols = Vec::new();
        for b in &trial {
            for j in 0..r.degree() {
                cols.push(s.embed(&unit_vector(r, j))?.mul(b).coeffs().to_vec());
            }
        }
        if rank_mod_p(&cols, s.degree(), p) == cols.len() {
            chosen = trial;
            if chosen.len() == n {
                return Ok(chosen);
            }
        }
    }
    Err(GroupRingError::Domain("no R-basis found".into()))
}

/// Multiplication by `u` on `S[G] ≅ R[G]^n` in the default basis.
pub fn transfer_matrix(u: &GroupRingElement, r: &CoeffRing) -> Result<GroupRingMatrix, GroupRingError> {
    let basis = default_basis(r, u.ring())?;
    transfer_matrix_with_basis(u, r, &basis)
}

/// `M_ij = Σ_g c_{g,j,i} g` where `u_g b_j = Σ_i c_{g,j,i} b_i`.
pub fn transfer_matrix_with_basis(
    u: &GroupRingElement,
    r: &CoeffRing,
    basis: &[RingElement],
) -> Result<GroupRingMatrix, GroupRingError> {
    let s = u.ring();
    let n = relative_degree(r, s)?;
    if basis.len() != n || basis.iter().any(|b| b.ring() != s) {
        return Err(GroupRingError::Mismatch);
    }
    if !u.is_unit() {
        return Err(GroupRingError::NotAUnit);
    }
    let pp = PrimePower::new(s.p(), s.precision());
    let binv = inverse_mod(&basis_matrix(r, s, basis)?, pp).ok_or_else(|| GroupRingError::Domain("not a basis".into()))?;
    let dr = r.degree();
    let group = u.group();
    let mut flat = vec![vec![vec![0u64; group.order() * dr]; n]; n];
    for g in 0..group.order() {
        let ug = u.coefficient(g);
        if ug.is_zero() {
            continue;
        }
        for (j, bj) in basis.iter().enumerate() {
            let v = ug.mul(bj);
            // coordinates: index i*dr + k
            let coords: Vec<u64> = binv
                .iter()
                .map(|row| row.iter().zip(v.coeffs()).fold(0u64, |a, (&x, &y)| (a + crate::coeff::arith::mul_mod(x, y, pp.m)) % pp.m))
                .collect();
            for i in 0..n {
                flat[i][j][g * dr..(g + 1) * dr].copy_from_slice(&coords[i * dr..(i + 1) * dr]);
            }
        }
    }
    let entries = flat
        .into_iter()
        .map(|row| row.into_iter().map(|c| GroupRingElement::from_flat(r, group, c)).collect())
        .collect();
    GroupRingMatrix::new(entries)
}
