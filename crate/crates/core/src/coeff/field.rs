use std::fmt;
use std::sync::Arc;

use super::arith::{inv_mod, mul_mod};
use super::level::{ExtKind, Level, Recipe, Shape};
use super::{poly, CoeffError};

/// A finite field `F_{p^n}`, possibly reached through Artin–Schreier steps.
#[derive(Clone)]
pub struct FiniteField {
    pub(crate) level: Arc<Level>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.level.same(&other.level)
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p(), self.degree())
    }
}

/// `F_{p^n}` with the lexicographically smallest irreducible modulus.
pub fn make_extension(p: u64, n: usize) -> Result<FiniteField, CoeffError> {
    FiniteField::new(p, n)
}

impl FiniteField {
    pub fn new(p: u64, n: usize) -> Result<Self, CoeffError> {
        if !super::arith::is_prime(p) {
            return Err(CoeffError::CompositeP(p));
        }
        if n == 0 {
            return Err(CoeffError::Domain("degree must be positive".into()));
        }
        Ok(FiniteField { level: Level::get(&unramified_recipe(p, n), 1)? })
    }

    /// `F_p[x]/(f)` for a monic `f` given low degree first (leading 1 included).
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, CoeffError> {
        if modulus.last() != Some(&1) || modulus.len() < 2 {
            return Err(CoeffError::Domain("modulus must be monic of positive degree".into()));
        }
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        let recipe = if modulus.len() == 2 {
            Recipe::Prime { p }
        } else {
            Recipe::Simple { p, modulus }
        };
        Ok(FiniteField { level: Level::get(&recipe, 1)? })
    }

    pub fn p(&self) -> u64 {
        self.level.p
    }

    pub fn degree(&self) -> usize {
        self.level.degree
    }

    pub fn order(&self) -> u128 {
        (self.p() as u128).pow(self.degree() as u32)
    }

    /// Number of Artin–Schreier steps above the bottom field.
    pub fn tower_height(&self) -> usize {
        let mut h = 0;
        let mut r = &self.level.recipe;
        while let Recipe::AsChild(b) = r {
            h += 1;
            r = b;
        }
        h
    }

    /// The defining polynomial over F_p when the field is a simple extension.
    pub fn modulus(&self) -> Option<Vec<u64>> {
        match &self.level.recipe {
            Recipe::Prime { .. } => Some(vec![0, 1]),
            Recipe::Simple { modulus, .. } => Some(modulus.clone()),
            _ => None,
        }
    }

    /// The degree-p extension `K[y]/(y^p - y - c)` with `Tr(c) = 1`.
    pub fn artin_schreier_child(&self) -> Result<FiniteField, CoeffError> {
        Ok(FiniteField { level: self.level.as_child()? })
    }

    /// The constant `c` of this field's own Artin–Schreier step, if it is one.
    pub fn artin_schreier_constant(&self) -> Option<FieldElement> {
        match &self.level.shape {
            Shape::Ext { base, kind: ExtKind::ArtinSchreier { c }, .. } => Some(FieldElement {
                field: FiniteField { level: base.clone() },
                coeffs: c.clone(),
            }),
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(self.level.zero())
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> FieldElement {
        self.wrap(self.level.from_int(k))
    }

    /// The generator of the top step (`x` of `F_p[x]/(f)` or `y` of an Artin–Schreier step).
    pub fn generator(&self) -> FieldElement {
        self.wrap(self.level.generator())
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement, CoeffError> {
        if coeffs.len() != self.degree() {
            return Err(CoeffError::Domain(format!(
                "expected {} coefficients, got {}",
                self.degree(),
                coeffs.len()
            )));
        }
        Ok(self.wrap(coeffs.iter().map(|&c| c % self.p()).collect()))
    }

    pub(crate) fn wrap(&self, coeffs: Vec<u64>) -> FieldElement {
        FieldElement { field: self.clone(), coeffs }
    }

    /// All elements, in the order of their base-p coefficient digits.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let p = self.p();
        let d = self.degree();
        (0..self.order()).map(move |k| {
            let mut t = k;
            let coeffs = (0..d)
                .map(|_| {
                    let c = (t % p as u128) as u64;
                    t /= p as u128;
                    c
                })
                .collect();
            self.wrap(coeffs)
        })
    }

    /// The image of `x` under the registered embedding into this field.
    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement, CoeffError> {
        Ok(self.wrap(self.level.embed_from(&x.field.level, &x.coeffs)?))
    }

    pub fn contains_subfield(&self, sub: &FiniteField) -> bool {
        self.level.embed_from(&sub.level, &sub.level.zero()).is_ok()
    }
}

pub(crate) fn unramified_recipe(p: u64, n: usize) -> Recipe {
    if n == 1 {
        Recipe::Prime { p }
    } else {
        Recipe::Simple { p, modulus: poly::smallest_irreducible(p, n) }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub(crate) field: FiniteField,
    pub(crate) coeffs: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                _ => format!("{c}*e{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn lift_pair(&self, other: &FieldElement) -> (FiniteField, Vec<u64>, Vec<u64>) {
        if self.field == other.field {
            return (self.field.clone(), self.coeffs.clone(), other.coeffs.clone());
        }
        if let Ok(b) = self.field.embed(other) {
            return (self.field.clone(), self.coeffs.clone(), b.coeffs);
        }
        let a = other.field.embed(self).expect("elements of unrelated fields");
        (other.field.clone(), a.coeffs, other.coeffs.clone())
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        let (f, a, b) = self.lift_pair(other);
        f.wrap(f.level.add(&a, &b))
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        let (f, a, b) = self.lift_pair(other);
        f.wrap(f.level.sub(&a, &b))
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        let (f, a, b) = self.lift_pair(other);
        f.wrap(f.level.mul(&a, &b))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.wrap(self.field.level.neg(&self.coeffs))
    }

    pub fn scale(&self, k: i64) -> FieldElement {
        let k = k.rem_euclid(self.field.p() as i64) as u64;
        self.field.wrap(self.field.level.scale(&self.coeffs, k))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.field.wrap(self.field.level.pow(&self.coeffs, e))
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.field.level.inverse(&self.coeffs).map(|c| self.field.wrap(c))
    }

    /// `x ↦ x^p`, computed from the Frobenius images of the tower generators.
    pub fn frobenius(&self) -> FieldElement {
        self.field.wrap(self.field.level.frobenius(&self.coeffs))
    }

    /// Absolute trace to F_p.
    pub fn trace(&self) -> u64 {
        self.field.level.trace(&self.coeffs)
    }
}

/// Solves `s - s^p = a`, moving to the Artin–Schreier child when `Tr(a) ≠ 0`.
pub fn solve_artin_schreier(a: &FieldElement) -> (FieldElement, FiniteField) {
    let field = &a.field;
    if let Some(s) = as_solve(&field.level, &a.coeffs) {
        return (field.wrap(s), field.clone());
    }
    let child = field.artin_schreier_child().expect("tower extension within budget");
    let s = solve_in_child(&field.level, &child.level, &a.coeffs);
    (child.wrap(s), child)
}

/// `s = -t·y + u` with `P(u) = a - t·c` in the parent, where `t = Tr(a)`.
pub(crate) fn solve_in_child(parent: &Arc<Level>, child: &Arc<Level>, a: &[u64]) -> Vec<u64> {
    let p = parent.p;
    let t = parent.trace(a);
    let Shape::Ext { kind: ExtKind::ArtinSchreier { c }, .. } = &child.shape else { unreachable!() };
    let rhs = parent.sub(a, &parent.scale(c, t));
    let u = as_solve(parent, &rhs).expect("trace-zero right-hand side");
    let mut s = child.zero();
    let bs = parent.degree;
    s[..bs].copy_from_slice(&u);
    s[bs] = (p - t) % p;
    s
}

/// Solves `s - s^p = a` inside the given field level, or `None` when `Tr(a) ≠ 0`.
pub(crate) fn as_solve(l: &Arc<Level>, a: &[u64]) -> Option<Vec<u64>> {
    debug_assert!(l.is_field);
    if a.iter().all(|&x| x == 0) {
        return Some(l.zero());
    }
    let p = l.p;
    match &l.shape {
        Shape::Base => None,
        Shape::Ext { base, rel, kind: ExtKind::ArtinSchreier { c }, .. } => {
            if l.trace(a) != 0 {
                return None;
            }
            let bs = base.degree;
            let rel = *rel;
            let mut cpow = vec![base.from_int(1)];
            for k in 1..rel {
                let next = base.mul(&cpow[k - 1], c);
                cpow.push(next);
            }
            let binom = binomials_mod(rel, p);
            let mut s = vec![base.zero(); rel];
            let mut fs = vec![base.zero(); rel];
            for m in (0..rel).rev() {
                let mut b = a[m * bs..(m + 1) * bs].to_vec();
                for j in m + 1..rel {
                    let coef = binom[j][m];
                    if coef == 0 {
                        continue;
                    }
                    let term = base.mul(&cpow[j - m], &fs[j]);
                    base.add_assign(&mut b, &base.scale(&term, coef));
                }
                if m + 1 < rel {
                    let tr = base.trace(&b);
                    if tr != 0 {
                        // s_{m+1} += λ shifts b by (m+1)·c·λ
                        let inv = inv_mod((m + 1) as u64, p).unwrap();
                        let lambda = (p - mul_mod(tr, inv, p)) % p;
                        s[m + 1][0] = (s[m + 1][0] + lambda) % p;
                        fs[m + 1][0] = (fs[m + 1][0] + lambda) % p;
                        base.add_assign(&mut b, &base.scale(c, mul_mod((m + 1) as u64, lambda, p)));
                    }
                }
                s[m] = as_solve(base, &b)?;
                fs[m] = base.frobenius(&s[m]);
            }
            Some(s.concat())
        }
        Shape::Ext { .. } => {
            // small field: F_p-linear algebra on P(e_i) = e_i - φ(e_i)
            let d = l.degree;
            let cols: Vec<Vec<u64>> = (0..d)
                .map(|i| {
                    let mut e = l.zero();
                    e[i] = 1;
                    l.sub(&e, &l.frobenius(&e))
                })
                .collect();
            let rows: Vec<Vec<u64>> = (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect();
            crate::linalg::solve_mod_p(&rows, a, p)
        }
    }
}

fn binomials_mod(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; n]; n];
    for j in 0..n {
        b[j][0] = 1;
        for m in 1..=j {
            b[j][m] = (b[j - 1][m - 1] + if m < j { b[j - 1][m] } else { 0 }) % p;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_uses_smallest_modulus() {
        let f = make_extension(3, 2).unwrap();
        assert_eq!(f.modulus().unwrap(), vec![1, 0, 1]);
        assert!(matches!(make_extension(4, 1), Err(CoeffError::CompositeP(4))));
    }

    #[test]
    fn frobenius_on_theta() {
        // θ² = θ + 1 over F_3, i.e. modulus x² - x - 1
        let f = FiniteField::with_modulus(3, &[2, 2, 1]).unwrap();
        let theta = f.generator();
        assert_eq!(theta.frobenius(), f.element(&[1, 2]).unwrap());
        assert_eq!(theta.frobenius(), theta.pow(3));
        for x in f.elements() {
            assert_eq!(x.frobenius().frobenius(), x);
        }
    }

    #[test]
    fn artin_schreier_examples() {
        let f = FiniteField::with_modulus(3, &[2, 2, 1]).unwrap();
        let a = f.element(&[2, 2]).unwrap();
        let (s, k) = solve_artin_schreier(&a);
        assert_eq!(k, f);
        assert_eq!(s.sub(&s.pow(3)), a);
        // θ itself is one solution; ours differs by a constant
        assert_eq!(s.sub(&f.generator()).coeffs()[1], 0);

        let f3 = make_extension(3, 1).unwrap();
        assert!(f3.elements().all(|s| s.sub(&s.pow(3)).is_zero()));
        let (s, k) = solve_artin_schreier(&f3.one());
        assert_eq!(k.order(), 27);
        assert_eq!(s.sub(&s.pow(3)), k.one());
    }

    #[test]
    fn tower_traces_and_inverses() {
        let k = make_extension(3, 2).unwrap();
        let k1 = k.artin_schreier_child().unwrap();
        let k2 = k1.artin_schreier_child().unwrap();
        assert_eq!(k2.degree(), 18);
        for field in [&k, &k1, &k2] {
            // trace = Σ φ^i, checked on a few elements
            for x in field.elements().step_by(997).take(6) {
                let mut acc = field.zero();
                let mut y = x.clone();
                for _ in 0..field.degree() {
                    acc = acc.add(&y);
                    y = y.frobenius();
                }
                assert_eq!(y, x);
                assert_eq!(acc, field.from_int(x.trace() as i64));
                assert_eq!(x.frobenius(), x.pow(3));
                if !x.is_zero() {
                    assert_eq!(x.mul(&x.inv().unwrap()), field.one());
                }
            }
        }
        let c = k2.artin_schreier_constant().unwrap();
        assert_eq!(c.trace(), 1);
    }

    #[test]
    fn f16_from_two_quadratic_steps() {
        let f4 = make_extension(2, 2).unwrap();
        let tower = f4.artin_schreier_child().unwrap();
        let flat = make_extension(2, 4).unwrap();
        assert_eq!(tower.order(), 16);
        // the embedding of the flat field is a bijective ring homomorphism
        let images: Vec<FieldElement> = flat.elements().map(|x| tower.embed(&x).unwrap()).collect();
        let mut seen = std::collections::HashSet::new();
        for y in &images {
            assert!(seen.insert(y.coeffs().to_vec()));
        }
        let xs: Vec<FieldElement> = flat.elements().collect();
        for (i, a) in xs.iter().enumerate() {
            for (j, b) in xs.iter().enumerate() {
                let ab = flat.elements().position(|z| z == a.mul(b)).unwrap();
                assert_eq!(images[ab], images[i].mul(&images[j]));
            }
            assert_eq!(tower.embed(&a.frobenius()).unwrap(), images[i].frobenius());
        }
    }
}
