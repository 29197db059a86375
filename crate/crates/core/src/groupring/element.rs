use std::fmt;
use std::sync::Arc;

use super::GroupRingError;
use crate::coeff::{ring_frobenius_raw, CoeffRing, RingElement};
use crate::groups::Group;
use crate::linalg::solve_mod_p;

pub(crate) fn same_group(a: &Arc<Group>, b: &Arc<Group>) -> bool {
    Arc::ptr_eq(a, b) || (a.order() == b.order() && a.name() == b.name())
}

/// `Σ a_g g` with `a_g` in a coefficient ring; `coeffs` holds the blocks `a_g` in element order.
#[derive(Clone)]
pub struct GroupRingElement {
    pub(crate) ring: CoeffRing,
    pub(crate) group: Arc<Group>,
    pub(crate) coeffs: Vec<u64>,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && same_group(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}
impl Eq for GroupRingElement {}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.ring.degree();
        let terms: Vec<String> = (0..self.group.order())
            .filter(|&g| self.coeffs[g * d..(g + 1) * d].iter().any(|&c| c != 0))
            .map(|g| format!("{:?}*[{g}]", &self.coeffs[g * d..(g + 1) * d]))
            .collect();
        write!(f, "GR({})", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

impl GroupRingElement {
    pub fn zero(ring: &CoeffRing, group: &Arc<Group>) -> Self {
        GroupRingElement { ring: ring.clone(), group: group.clone(), coeffs: vec![0; group.order() * ring.degree()] }
    }

    pub fn one(ring: &CoeffRing, group: &Arc<Group>) -> Self {
        Self::group_element(ring, group, 0)
    }

    pub fn group_element(ring: &CoeffRing, group: &Arc<Group>, g: usize) -> Self {
        let mut x = Self::zero(ring, group);
        x.coeffs[g * ring.degree()] = 1;
        x
    }

    /// `x · 1`
    pub fn scalar(group: &Arc<Group>, x: &RingElement) -> Self {
        let ring = x.ring().clone();
        let mut out = Self::zero(&ring, group);
        out.coeffs[..ring.degree()].copy_from_slice(x.coeffs());
        out
    }

    pub fn from_coefficients(ring: &CoeffRing, group: &Arc<Group>, coeffs: &[RingElement]) -> Result<Self, GroupRingError> {
        if coeffs.len() != group.order() || coeffs.iter().any(|c| c.ring() != ring) {
            return Err(GroupRingError::Mismatch);
        }
        Ok(GroupRingElement { ring: ring.clone(), group: group.clone(), coeffs: coeffs.iter().flat_map(|c| c.coeffs().to_vec()).collect() })
    }

    pub(crate) fn from_flat(ring: &CoeffRing, group: &Arc<Group>, coeffs: Vec<u64>) -> Self {
        debug_assert_eq!(coeffs.len(), group.order() * ring.degree());
        GroupRingElement { ring: ring.clone(), group: group.clone(), coeffs }
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn flat(&self) -> &[u64] {
        &self.coeffs
    }

    fn d(&self) -> usize {
        self.ring.degree()
    }

    pub(crate) fn block(&self, g: usize) -> &[u64] {
        let d = self.d();
        &self.coeffs[g * d..(g + 1) * d]
    }

    pub fn coefficient(&self, g: usize) -> RingElement {
        self.ring.element(self.block(g)).expect("block has ring degree")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) {
        assert!(
            self.ring == other.ring && same_group(&self.group, &other.group),
            "group ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let m = self.ring.modulus_value();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % m).collect();
        Self::from_flat(&self.ring, &self.group, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let m = self.ring.modulus_value();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + m - b) % m).collect();
        Self::from_flat(&self.ring, &self.group, coeffs)
    }

    pub fn neg(&self) -> Self {
        let m = self.ring.modulus_value();
        Self::from_flat(&self.ring, &self.group, self.coeffs.iter().map(|&a| (m - a) % m).collect())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let m = self.ring.modulus_value();
        let k = k.rem_euclid(m as i64) as u64;
        Self::from_flat(&self.ring, &self.group, self.coeffs.iter().map(|&a| crate::coeff::arith::mul_mod(a, k, m)).collect())
    }

    /// Multiplication by a coefficient-ring scalar.
    pub fn scale(&self, x: &RingElement) -> Self {
        assert!(x.ring() == &self.ring, "scalar from another ring");
        let lvl = &self.ring.level;
        let d = self.d();
        let mut out = vec![0u64; self.coeffs.len()];
        for g in 0..self.group.order() {
            let b = self.block(g);
            if b.iter().any(|&c| c != 0) {
                lvl.mul_acc(&mut out[g * d..(g + 1) * d], b, x.coeffs());
            }
        }
        Self::from_flat(&self.ring, &self.group, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let lvl = &self.ring.level;
        let d = self.d();
        let n = self.group.order();
        // accumulate unreduced products and reduce once per group element
        let w = lvl.wide_len();
        let mut wide = vec![0u64; n * w];
        let nz_b: Vec<usize> = (0..n).filter(|&h| other.block(h).iter().any(|&c| c != 0)).collect();
        for g in 0..n {
            let a = self.block(g);
            if a.iter().all(|&c| c == 0) {
                continue;
            }
            for &h in &nz_b {
                let gh = self.group.mul(g, h);
                lvl.mul_acc_wide(&mut wide[gh * w..(gh + 1) * w], a, other.block(h));
            }
        }
        let mut out = Vec::with_capacity(n * d);
        for chunk in wide.chunks_mut(w) {
            lvl.reduce_slice(chunk);
            out.extend_from_slice(&chunk[..d]);
        }
        Self::from_flat(&self.ring, &self.group, out)
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring, &self.group);
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

    /// The augmentation `Σ a_g`.
    pub fn aug(&self) -> RingElement {
        let lvl = &self.ring.level;
        let mut acc = lvl.zero();
        for g in 0..self.group.order() {
            lvl.add_assign(&mut acc, self.block(g));
        }
        self.ring.element(&acc).unwrap()
    }

    /// Sums of coefficients over each conjugacy class.
    pub fn classproj(&self) -> ClassFunction {
        let d = self.d();
        let lvl = &self.ring.level;
        let mut out = vec![0u64; self.group.num_classes() * d];
        for g in 0..self.group.order() {
            let c = self.group.class_of(g);
            lvl.add_assign(&mut out[c * d..(c + 1) * d], self.block(g));
        }
        ClassFunction { ring: self.ring.clone(), group: self.group.clone(), coeffs: out }
    }

    /// `Ψ(Σ a_g g) = Σ φ(a_g) g^p`.
    pub fn psi(&self) -> Self {
        let d = self.d();
        let lvl = &self.ring.level;
        let p = self.ring.p() as i64;
        let mut out = vec![0u64; self.coeffs.len()];
        for g in 0..self.group.order() {
            let b = self.block(g);
            if b.iter().any(|&c| c != 0) {
                let gp = self.group.pow(g, p);
                let fb = ring_frobenius_raw(lvl, b);
                lvl.add_assign(&mut out[gp * d..(gp + 1) * d], &fb);
            }
        }
        Self::from_flat(&self.ring, &self.group, out)
    }

    /// Frobenius applied to the coefficients only.
    pub fn frobenius_coefficients(&self) -> Self {
        let d = self.d();
        let lvl = &self.ring.level;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for g in 0..self.group.order() {
            out.extend(ring_frobenius_raw(lvl, self.block(g)));
        }
        debug_assert_eq!(out.len(), self.group.order() * d);
        Self::from_flat(&self.ring, &self.group, out)
    }

    /// Minimum p-adic valuation of the coefficients (the precision if zero).
    pub fn valuation(&self) -> u32 {
        let n = self.ring.precision();
        self.coeffs
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| crate::coeff::arith::valuation(c, self.ring.p()).min(n))
            .min()
            .unwrap_or(n)
    }

    /// Exact division by `p^k`; the top `k` digits become zero.
    pub fn div_p_pow(&self, k: u32) -> Result<Self, GroupRingError> {
        let pk = self.ring.p().pow(k);
        if self.coeffs.iter().any(|&c| c % pk != 0) {
            return Err(GroupRingError::Domain(format!("not divisible by p^{k}")));
        }
        Ok(Self::from_flat(&self.ring, &self.group, self.coeffs.iter().map(|&c| c / pk).collect()))
    }

    /// The same residues read in `O/p^prec` (truncation, or the digit lift when raising).
    pub fn with_precision(&self, prec: u32) -> Result<Self, GroupRingError> {
        let ring = self.ring.with_precision(prec)?;
        let m = ring.modulus_value();
        Ok(Self::from_flat(&ring, &self.group, self.coeffs.iter().map(|&c| c % m).collect()))
    }

    pub fn eq_mod(&self, other: &Self, k: u32) -> bool {
        let pk = self.ring.p().pow(k.min(self.ring.precision()));
        self.ring == other.ring && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a % pk == b % pk)
    }

    fn is_p_group_ring(&self) -> bool {
        self.group.is_p_group(self.ring.p())
    }

    /// The image in `κ[G]` is a unit. For p-groups `κ[G]` is local and this is the
    /// augmentation test; otherwise the regular representation over F_p is checked.
    pub fn is_unit(&self) -> bool {
        if self.is_p_group_ring() {
            return self.aug().reduce().map(|a| !a.is_zero()).unwrap_or(false);
        }
        self.residue_inverse().is_some()
    }

    /// Unit test through the regular representation only.
    pub fn is_unit_by_matrix(&self) -> bool {
        self.residue_inverse().is_some()
    }

    /// Solves `x y = 1` in `κ[G]` through the left regular representation over F_p.
    fn residue_inverse(&self) -> Option<Vec<u64>> {
        let p = self.ring.p();
        let res_ring = self.ring.with_precision(1).ok()?;
        let xr = self.with_precision(1).ok()?;
        let n = self.group.order();
        let d = self.d();
        let dim = n * d;
        let mut cols = Vec::with_capacity(dim);
        for g in 0..n {
            for i in 0..d {
                let mut e = vec![0u64; dim];
                e[g * d + i] = 1;
                cols.push(xr.mul(&Self::from_flat(&res_ring, &self.group, e)).coeffs);
            }
        }
        let rows: Vec<Vec<u64>> = (0..dim).map(|r| (0..dim).map(|c| cols[c][r]).collect()).collect();
        let mut one = vec![0u64; dim];
        one[0] = 1;
        let y = solve_mod_p(&rows, &one, p)?;
        (xr.mul(&Self::from_flat(&res_ring, &self.group, y.clone())).coeffs == one).then_some(y)
    }

    /// Inverse by Newton iteration `y ← y(2 − xy)` from the residue inverse.
    pub fn invert(&self) -> Result<Self, GroupRingError> {
        let y0 = if self.is_p_group_ring() && self.group.order() * self.d() > 400 {
            // local ring: a scalar seed converges J-adically
            let a = self.aug().inverse().map_err(|_| GroupRingError::NotAUnit)?;
            Self::scalar(&self.group, &a)
        } else {
            let y = self.residue_inverse().ok_or(GroupRingError::NotAUnit)?;
            Self::from_flat(&self.ring, &self.group, y)
        };
        let one = Self::one(&self.ring, &self.group);
        let two = one.scale_int(2);
        let mut y = y0;
        for _ in 0..64 {
            let xy = self.mul(&y);
            if xy == one {
                return Ok(y);
            }
            y = y.mul(&two.sub(&xy));
        }
        Err(GroupRingError::NotAUnit)
    }

    /// Coefficientwise image in a ring containing this one.
    pub fn embed_into(&self, target: &CoeffRing) -> Result<Self, GroupRingError> {
        let mut out = Vec::with_capacity(self.group.order() * target.degree());
        for g in 0..self.group.order() {
            out.extend(target.embed(&self.coefficient(g))?.coeffs().to_vec());
        }
        Ok(Self::from_flat(target, &self.group, out))
    }

    /// Image under a group homomorphism `G → H` given on elements.
    pub fn push_forward(&self, target: &Arc<Group>, map: &[usize]) -> Self {
        let d = self.d();
        let lvl = &self.ring.level;
        let mut out = vec![0u64; target.order() * d];
        for g in 0..self.group.order() {
            let h = map[g];
            lvl.add_assign(&mut out[h * d..(h + 1) * d], self.block(g));
        }
        Self::from_flat(&self.ring, target, out)
    }

    /// Membership in the kernel of `O[G] → O[G^ab]`.
    pub fn in_a_ideal(&self) -> bool {
        let (_, q, proj) = self.group.abelianization();
        self.push_forward(&Arc::new(q), &proj).is_zero()
    }
}

/// `Σ r_c [c]` over conjugacy classes.
#[derive(Clone)]
pub struct ClassFunction {
    pub(crate) ring: CoeffRing,
    pub(crate) group: Arc<Group>,
    pub(crate) coeffs: Vec<u64>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && same_group(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}
impl Eq for ClassFunction {}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.ring.degree();
        let parts: Vec<String> = (0..self.group.num_classes()).map(|c| format!("{:?}", &self.coeffs[c * d..(c + 1) * d])).collect();
        write!(f, "CF[{}]", parts.join(", "))
    }
}

impl ClassFunction {
    pub fn zero(ring: &CoeffRing, group: &Arc<Group>) -> Self {
        ClassFunction { ring: ring.clone(), group: group.clone(), coeffs: vec![0; group.num_classes() * ring.degree()] }
    }

    pub fn from_coefficients(ring: &CoeffRing, group: &Arc<Group>, coeffs: &[RingElement]) -> Result<Self, GroupRingError> {
        if coeffs.len() != group.num_classes() || coeffs.iter().any(|c| c.ring() != ring) {
            return Err(GroupRingError::Mismatch);
        }
        Ok(ClassFunction { ring: ring.clone(), group: group.clone(), coeffs: coeffs.iter().flat_map(|c| c.coeffs().to_vec()).collect() })
    }

    pub(crate) fn from_flat(ring: &CoeffRing, group: &Arc<Group>, coeffs: Vec<u64>) -> Self {
        ClassFunction { ring: ring.clone(), group: group.clone(), coeffs }
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn flat(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn get(&self, c: usize) -> RingElement {
        let d = self.ring.degree();
        self.ring.element(&self.coeffs[c * d..(c + 1) * d]).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.ring.modulus_value();
        assert!(self.ring == o.ring);
        ClassFunction::from_flat(&self.ring, &self.group, self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| (a + b) % m).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.ring.modulus_value();
        assert!(self.ring == o.ring);
        ClassFunction::from_flat(&self.ring, &self.group, self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| (a + m - b) % m).collect())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let m = self.ring.modulus_value();
        let k = k.rem_euclid(m as i64) as u64;
        ClassFunction::from_flat(&self.ring, &self.group, self.coeffs.iter().map(|&a| crate::coeff::arith::mul_mod(a, k, m)).collect())
    }

    /// `Φ(Σ r_c [c]) = Σ φ(r_c) [c^p]`.
    pub fn phi(&self) -> Self {
        let d = self.ring.degree();
        let lvl = &self.ring.level;
        let pm = self.group.power_map_on_classes(self.ring.p() as i64);
        let mut out = vec![0u64; self.coeffs.len()];
        for c in 0..self.group.num_classes() {
            let b = &self.coeffs[c * d..(c + 1) * d];
            if b.iter().any(|&x| x != 0) {
                let t = pm[c];
                let fb = ring_frobenius_raw(lvl, b);
                lvl.add_assign(&mut out[t * d..(t + 1) * d], &fb);
            }
        }
        ClassFunction::from_flat(&self.ring, &self.group, out)
    }

    pub fn div_p_pow(&self, k: u32) -> Result<Self, GroupRingError> {
        let pk = self.ring.p().pow(k);
        if self.coeffs.iter().any(|&c| c % pk != 0) {
            return Err(GroupRingError::Domain(format!("class function not divisible by p^{k}")));
        }
        Ok(ClassFunction::from_flat(&self.ring, &self.group, self.coeffs.iter().map(|&c| c / pk).collect()))
    }

    pub fn with_precision(&self, prec: u32) -> Result<Self, GroupRingError> {
        let ring = self.ring.with_precision(prec)?;
        let m = ring.modulus_value();
        Ok(ClassFunction::from_flat(&ring, &self.group, self.coeffs.iter().map(|&c| c % m).collect()))
    }

    pub fn eq_mod(&self, other: &Self, k: u32) -> bool {
        let pk = self.ring.p().pow(k.min(self.ring.precision()));
        self.coeffs.len() == other.coeffs.len() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a % pk == b % pk)
    }

    pub fn embed_into(&self, target: &CoeffRing) -> Result<Self, GroupRingError> {
        let mut out = Vec::new();
        for c in 0..self.group.num_classes() {
            out.extend(target.embed(&self.get(c))?.coeffs().to_vec());
        }
        Ok(ClassFunction::from_flat(target, &self.group, out))
    }

    /// Coordinates over `Z/p^N` (class-major), for linear algebra.
    pub fn coordinates(&self) -> &[u64] {
        &self.coeffs
    }
}
