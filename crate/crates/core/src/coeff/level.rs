//! The arithmetic engine shared by finite fields and truncated Witt rings.
//!
//! A level is `Z/p^N` or a monic extension of a lower level. Elements are flat `u64`
//! vectors over `Z/p^N`; block `j` (of the base degree) is the coefficient of `Y^j`.
//! A field is simply a level at precision 1 whose chain holds no cyclotomic step.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use super::arith::{inv_mod, is_prime, mul_mod};
use super::poly;
use super::CoeffError;
use crate::budget::Budget;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Recipe {
    Prime { p: u64 },
    /// Simple extension of the prime level by a monic polynomial over F_p (low degree first,
    /// leading 1 included).
    Simple { p: u64, modulus: Vec<u64> },
    /// The canonical Artin–Schreier step `Y^p - Y - c` over the parent.
    AsChild(Box<Recipe>),
    Cyclo { base: Box<Recipe>, e: u64 },
}

impl Recipe {
    pub fn p(&self) -> u64 {
        match self {
            Recipe::Prime { p } | Recipe::Simple { p, .. } => *p,
            Recipe::AsChild(b) | Recipe::Cyclo { base: b, .. } => b.p(),
        }
    }
}

#[derive(Debug)]
pub(crate) enum ExtKind {
    Simple,
    ArtinSchreier { c: Vec<u64> },
    Cyclotomic { u: u64 },
}

#[derive(Debug)]
pub(crate) enum Shape {
    Base,
    Ext {
        base: Arc<Level>,
        rel: usize,
        /// `Y^rel = Σ red[j] Y^j`
        red: Vec<Vec<u64>>,
        red_zero: Vec<bool>,
        kind: ExtKind,
    },
}

#[derive(Debug)]
pub(crate) struct Level {
    pub id: usize,
    pub recipe: Recipe,
    pub p: u64,
    pub prec: u32,
    pub m: u64,
    pub degree: usize,
    pub shape: Shape,
    pub is_field: bool,
    frob_pows: OnceLock<Vec<Vec<u64>>>,
    trace_vec: OnceLock<Vec<u64>>,
    links: Mutex<HashMap<usize, Arc<Vec<u64>>>>,
}

type Cache = Mutex<HashMap<(Recipe, u32), Arc<Level>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

static NEXT_ID: AtomicUsize = AtomicUsize::new(1);

#[inline]
fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&x| x == 0)
}

#[inline]
fn is_scalar(a: &[u64]) -> bool {
    a[1..].iter().all(|&x| x == 0)
}

impl Level {
    pub fn get(recipe: &Recipe, prec: u32) -> Result<Arc<Level>, CoeffError> {
        if let Some(l) = cache().lock().unwrap().get(&(recipe.clone(), prec)) {
            return Ok(l.clone());
        }
        // built outside the lock: construction recurses into lower levels
        let built = Arc::new(Level::build(recipe, prec)?);
        let mut c = cache().lock().unwrap();
        Ok(c.entry((recipe.clone(), prec)).or_insert(built).clone())
    }

    fn build(recipe: &Recipe, prec: u32) -> Result<Level, CoeffError> {
        let p = recipe.p();
        if !is_prime(p) {
            return Err(CoeffError::CompositeP(p));
        }
        if prec == 0 {
            return Err(CoeffError::Precision("precision must be at least 1".into()));
        }
        let m = p
            .checked_pow(prec)
            .filter(|&m| m < (1 << 31))
            .ok_or_else(|| CoeffError::Precision(format!("{p}^{prec} exceeds the 31-bit modulus limit")))?;
        let (shape, degree, is_field) = match recipe {
            Recipe::Prime { .. } => (Shape::Base, 1, prec == 1),
            Recipe::Simple { modulus, .. } => {
                if !poly::is_irreducible(modulus, p) {
                    return Err(CoeffError::Reducible);
                }
                let base = Level::get(&Recipe::Prime { p }, prec)?;
                let rel = modulus.len() - 1;
                let red: Vec<Vec<u64>> = modulus[..rel].iter().map(|&c| vec![(m - c % m) % m]).collect();
                let red_zero = red.iter().map(|b| is_zero(b)).collect();
                (Shape::Ext { base, rel, red, red_zero, kind: ExtKind::Simple }, rel, prec == 1)
            }
            Recipe::AsChild(parent) => {
                let base = Level::get(parent, prec)?;
                if !base.residue()?.is_field {
                    return Err(CoeffError::Domain("Artin–Schreier steps need a field residue".into()));
                }
                let rel = p as usize;
                if base.degree * rel > Budget::global().tower_degree {
                    return Err(CoeffError::Budget(format!(
                        "tower degree {} exceeds the budget {}",
                        base.degree * rel,
                        Budget::global().tower_degree
                    )));
                }
                let c = canonical_as_constant(&base)?;
                let mut red = vec![vec![0u64; base.degree]; rel];
                red[0] = c.clone();
                red[1][0] = 1;
                let red_zero = red.iter().map(|b| is_zero(b)).collect();
                let deg = base.degree * rel;
                let f = base.is_field;
                (Shape::Ext { base, rel, red, red_zero, kind: ExtKind::ArtinSchreier { c } }, deg, f)
            }
            Recipe::Cyclo { base, e } => {
                let base = Level::get(base, prec)?;
                let phi = poly::cyclotomic(*e);
                let rel = phi.len() - 1;
                let bs = base.degree;
                let red: Vec<Vec<u64>> = phi[..rel]
                    .iter()
                    .map(|&c| {
                        let mut b = vec![0u64; bs];
                        b[0] = (-c).rem_euclid(m as i64) as u64;
                        b
                    })
                    .collect();
                let red_zero = red.iter().map(|b| is_zero(b)).collect();
                let u = cyclotomic_frobenius_exponent(p, *e);
                let deg = bs * rel;
                (Shape::Ext { base, rel, red, red_zero, kind: ExtKind::Cyclotomic { u } }, deg, false)
            }
        };
        Ok(Level {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            recipe: recipe.clone(),
            p,
            prec,
            m,
            degree,
            shape,
            is_field,
            frob_pows: OnceLock::new(),
            trace_vec: OnceLock::new(),
            links: Mutex::new(HashMap::new()),
        })
    }

    pub fn at_prec(&self, prec: u32) -> Result<Arc<Level>, CoeffError> {
        Level::get(&self.recipe, prec)
    }

    pub fn residue(&self) -> Result<Arc<Level>, CoeffError> {
        self.at_prec(1)
    }

    pub fn as_child(&self) -> Result<Arc<Level>, CoeffError> {
        Level::get(&Recipe::AsChild(Box::new(self.recipe.clone())), self.prec)
    }

    pub fn base(&self) -> Option<&Arc<Level>> {
        match &self.shape {
            Shape::Base => None,
            Shape::Ext { base, .. } => Some(base),
        }
    }

    pub fn rel(&self) -> usize {
        match &self.shape {
            Shape::Base => 1,
            Shape::Ext { rel, .. } => *rel,
        }
    }

    pub fn same(&self, other: &Level) -> bool {
        self.recipe == other.recipe && self.prec == other.prec
    }

    // ---- basic vectors ----

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree]
    }

    pub fn from_int(&self, k: i64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = k.rem_euclid(self.m as i64) as u64;
        v
    }

    pub fn generator(&self) -> Vec<u64> {
        let mut v = self.zero();
        match &self.shape {
            Shape::Base => v[0] = 1,
            Shape::Ext { base, rel, .. } => {
                if *rel == 1 {
                    // degree-one extension: Y = -red[0]
                    return self.reduce_poly([base.zero(), base.one_vec()].concat());
                }
                v[base.degree] = 1;
            }
        }
        v
    }

    fn one_vec(&self) -> Vec<u64> {
        self.from_int(1)
    }

    pub fn reduce(&self, a: &mut [u64]) {
        for x in a.iter_mut() {
            *x %= self.m;
        }
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.m;
        a.iter().zip(b).map(|(&x, &y)| (x + y) % m).collect()
    }

    pub fn add_assign(&self, a: &mut [u64], b: &[u64]) {
        let m = self.m;
        for (x, &y) in a.iter_mut().zip(b) {
            *x = (*x + y) % m;
        }
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.m;
        a.iter().zip(b).map(|(&x, &y)| (x + m - y) % m).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        let m = self.m;
        a.iter().map(|&x| (m - x) % m).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        let m = self.m;
        let k = k % m;
        a.iter().map(|&x| x * k % m).collect()
    }

    fn scale_acc(&self, out: &mut [u64], a: &[u64], k: u64) {
        if k == 0 {
            return;
        }
        let m = self.m;
        for (o, &x) in out.iter_mut().zip(a) {
            if x != 0 {
                *o = (*o + x * k) % m;
            }
        }
    }

    // ---- multiplication ----

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        self.mul_acc(&mut out, a, b);
        out
    }

    /// `out += a * b`
    pub fn mul_acc(&self, out: &mut [u64], a: &[u64], b: &[u64]) {
        let m = self.m;
        match &self.shape {
            Shape::Base => {
                out[0] = (out[0] + mul_mod(a[0], b[0], m)) % m;
            }
            Shape::Ext { base, rel, .. } => {
                if is_scalar(a) {
                    self.scale_acc(out, b, a[0]);
                    return;
                }
                if is_scalar(b) {
                    self.scale_acc(out, a, b[0]);
                    return;
                }
                let len = (2 * rel - 1) * base.degree;
                let mut stack = [0u64; 64];
                let mut heap;
                let prod: &mut [u64] = if len <= 64 {
                    &mut stack[..len]
                } else {
                    heap = vec![0u64; len];
                    &mut heap
                };
                self.mul_acc_wide(prod, a, b);
                self.reduce_slice(prod);
                self.add_assign(out, &prod[..self.degree]);
            }
        }
    }

    /// Length of the unreduced product buffer used by [`Level::mul_acc_wide`].
    pub fn wide_len(&self) -> usize {
        match &self.shape {
            Shape::Base => 1,
            Shape::Ext { base, rel, .. } => (2 * rel - 1) * base.degree,
        }
    }

    /// `prod += a * b` as polynomials in the top variable, without reducing by the top modulus.
    pub fn mul_acc_wide(&self, prod: &mut [u64], a: &[u64], b: &[u64]) {
        match &self.shape {
            Shape::Base => prod[0] = (prod[0] + mul_mod(a[0], b[0], self.m)) % self.m,
            Shape::Ext { base, rel, .. } => {
                let bs = base.degree;
                for i in 0..*rel {
                    let ai = &a[i * bs..(i + 1) * bs];
                    if is_zero(ai) {
                        continue;
                    }
                    for j in 0..*rel {
                        let bj = &b[j * bs..(j + 1) * bs];
                        if is_zero(bj) {
                            continue;
                        }
                        base.mul_acc(&mut prod[(i + j) * bs..(i + j + 1) * bs], ai, bj);
                    }
                }
            }
        }
    }

    /// Reduces a wide buffer in place; the result occupies the first `degree` entries.
    pub fn reduce_slice(&self, prod: &mut [u64]) {
        let Shape::Ext { base, rel, red, red_zero, .. } = &self.shape else {
            return;
        };
        let bs = base.degree;
        let rel = *rel;
        let nblocks = prod.len() / bs;
        let mut stack = [0u64; 64];
        let mut heap = Vec::new();
        for k in (rel..nblocks).rev() {
            let t: &mut [u64] = if bs <= 64 {
                &mut stack[..bs]
            } else {
                heap.resize(bs, 0);
                &mut heap
            };
            t.copy_from_slice(&prod[k * bs..(k + 1) * bs]);
            if is_zero(t) {
                continue;
            }
            for j in 0..rel {
                if red_zero[j] {
                    continue;
                }
                base.mul_acc(&mut prod[(k - rel + j) * bs..(k - rel + j + 1) * bs], t, &red[j]);
            }
        }
    }

    /// Reduces a polynomial in `Y` (flat blocks, any length) modulo the defining polynomial.
    pub fn reduce_poly(&self, mut prod: Vec<u64>) -> Vec<u64> {
        if matches!(self.shape, Shape::Base) {
            prod.truncate(1);
            return prod;
        }
        self.reduce_slice(&mut prod);
        prod.truncate(self.degree);
        prod
    }

    pub fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one_vec();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// Multiplies every block of `x` by the base element `b`.
    fn scale_by_base_acc(&self, out: &mut [u64], x: &[u64], b: &[u64]) {
        let base = self.base().expect("extension level");
        let bs = base.degree;
        if is_scalar(b) {
            self.scale_acc(out, x, b[0]);
            return;
        }
        for t in 0..self.rel() {
            let xt = &x[t * bs..(t + 1) * bs];
            if !is_zero(xt) {
                base.mul_acc(&mut out[t * bs..(t + 1) * bs], b, xt);
            }
        }
    }

    // ---- Frobenius ----

    fn frob_pows(&self) -> &Vec<Vec<u64>> {
        self.frob_pows.get_or_init(|| {
            let y = self.compute_frob_generator();
            let mut pows = vec![self.one_vec()];
            for j in 1..self.rel() {
                let next = self.mul(&pows[j - 1], &y);
                pows.push(next);
            }
            pows
        })
    }

    /// `φ(Y)`: the unique root of `f^φ` congruent to `Y^p` (Hensel), or `Y^u` for
    /// cyclotomic steps.
    fn compute_frob_generator(&self) -> Vec<u64> {
        let Shape::Ext { base, kind, rel, .. } = &self.shape else {
            return self.one_vec();
        };
        let y = self.generator();
        match kind {
            ExtKind::Cyclotomic { u, .. } => self.pow(&y, *u as u128),
            ExtKind::ArtinSchreier { c } => {
                // fixed point of X -> X^p - φ(C)
                let fc = base.frobenius(c);
                let mut fc_full = self.zero();
                fc_full[..base.degree].copy_from_slice(&fc);
                let mut x = self.pow(&y, self.p as u128);
                for _ in 0..self.prec {
                    x = self.sub(&self.pow(&x, self.p as u128), &fc_full);
                }
                x
            }
            ExtKind::Simple => {
                // Newton on f (integer coefficients) from Y^p with a frozen derivative
                let f = self.defining_poly_ints();
                let mut x = self.pow(&y, self.p as u128);
                let d = self.eval_int_poly(&poly_derivative(&f, self.m), &x);
                let dinv = self.inverse(&d).expect("separable modulus");
                for _ in 0..=2 * *rel as u32 + self.prec {
                    let fx = self.eval_int_poly(&f, &x);
                    if is_zero(&fx) {
                        break;
                    }
                    x = self.sub(&x, &self.mul(&fx, &dinv));
                }
                x
            }
        }
    }

    fn defining_poly_ints(&self) -> Vec<u64> {
        let Shape::Ext { red, rel, .. } = &self.shape else { unreachable!() };
        let mut f: Vec<u64> = red.iter().map(|b| (self.m - b[0]) % self.m).collect();
        debug_assert_eq!(f.len(), *rel);
        f.push(1);
        f
    }

    fn eval_int_poly(&self, f: &[u64], x: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for &c in f.iter().rev() {
            acc = self.mul(&acc, x);
            acc[0] = (acc[0] + c) % self.m;
        }
        acc
    }

    /// The canonical Frobenius lift, computed directly at this level.
    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        let Shape::Ext { base, rel, kind, .. } = &self.shape else {
            return a.to_vec();
        };
        let bs = base.degree;
        if let (ExtKind::ArtinSchreier { c }, 1) = (kind, self.prec) {
            // φ(Y) = Y + c in characteristic p: Horner in (Y + c)
            let mut acc = base.frobenius(&a[(rel - 1) * bs..]);
            acc.resize(self.degree, 0);
            for j in (0..rel - 1).rev() {
                let mut next = self.zero();
                // acc * Y
                next[bs..].copy_from_slice(&acc[..(rel - 1) * bs]);
                let top = &acc[(rel - 1) * bs..];
                if !is_zero(top) {
                    // Y^p = Y + c
                    self.add_assign(&mut next[bs..2 * bs], top);
                    base.mul_acc(&mut next[..bs], top, c);
                }
                // + acc * c
                for t in 0..*rel {
                    let at = &acc[t * bs..(t + 1) * bs];
                    if !is_zero(at) {
                        base.mul_acc(&mut next[t * bs..(t + 1) * bs], at, c);
                    }
                }
                let fa = base.frobenius(&a[j * bs..(j + 1) * bs]);
                self.add_assign(&mut next[..bs], &fa);
                acc = next;
            }
            return acc;
        }
        let pows = self.frob_pows();
        let mut out = self.zero();
        for j in 0..*rel {
            let aj = &a[j * bs..(j + 1) * bs];
            if is_zero(aj) {
                continue;
            }
            let fa = base.frobenius(aj);
            self.scale_by_base_acc(&mut out, &pows[j], &fa);
        }
        out
    }

    /// The smallest level of the base chain that contains `a` (as a prefix).
    pub fn minimal_level(self: &Arc<Self>, a: &[u64]) -> Arc<Level> {
        let mut cur = self.clone();
        let last = a.iter().rposition(|&x| x != 0).unwrap_or(0);
        loop {
            let next = match &cur.shape {
                Shape::Ext { base, .. } if last < base.degree => base.clone(),
                _ => return cur,
            };
            cur = next;
        }
    }

    // ---- inversion ----

    pub fn inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_field {
            return self.field_inverse(a);
        }
        let res = self.residue().ok()?;
        let abar: Vec<u64> = a.iter().map(|&x| x % self.p).collect();
        let y0 = if res.is_field { res.field_inverse(&abar)? } else { res.matrix_inverse(&abar)? };
        let mut y = y0;
        let mut known = 1u32;
        let two = self.from_int(2);
        while known < self.prec {
            y = self.mul(&y, &self.sub(&two, &self.mul(a, &y)));
            known *= 2;
        }
        debug_assert_eq!(self.mul(a, &y), self.one_vec());
        Some(y)
    }

    fn matrix_inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        // columns are a·e_i
        let d = self.degree;
        let mut cols = Vec::with_capacity(d);
        for i in 0..d {
            let mut e = self.zero();
            e[i] = 1;
            cols.push(self.mul(a, &e));
        }
        let rows: Vec<Vec<u64>> = (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect();
        let x = crate::linalg::solve_mod_p(&rows, &self.one_vec(), self.p)?;
        (self.mul(a, &x) == self.one_vec()).then_some(x)
    }

    fn field_inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        if is_zero(a) {
            return None;
        }
        let Shape::Ext { base, rel, red, .. } = &self.shape else {
            return inv_mod(a[0], self.p).map(|x| vec![x]);
        };
        let bs = base.degree;
        // polynomials over the base as Vec<block>
        let mut f: Vec<Vec<u64>> = red.iter().map(|b| base.neg(b)).collect();
        f.push(base.one_vec());
        let mut r0 = f;
        let mut r1: Vec<Vec<u64>> = (0..*rel).map(|j| a[j * bs..(j + 1) * bs].to_vec()).collect();
        trim_poly(&mut r1);
        let mut s0: Vec<Vec<u64>> = vec![];
        let mut s1: Vec<Vec<u64>> = vec![base.one_vec()];
        while !r1.is_empty() {
            let (q, r) = poly_divrem(base, &r0, &r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let qs1 = poly_mul(base, &q, &s1);
            let ns = poly_sub(base, &s0, &qs1);
            s0 = std::mem::replace(&mut s1, ns);
        }
        if r0.len() != 1 {
            return None;
        }
        let g = base.field_inverse(&r0[0])?;
        let mut out = self.zero();
        for (j, c) in s0.iter().enumerate() {
            out[j * bs..(j + 1) * bs].copy_from_slice(&base.mul(c, &g));
        }
        Some(out)
    }

    // ---- traces (fields) ----

    /// Absolute trace to F_p of a field element.
    pub fn trace(&self, a: &[u64]) -> u64 {
        debug_assert!(self.is_field);
        let tv = self.trace_vector();
        a.iter().zip(tv).fold(0, |acc, (&x, &t)| (acc + x * t) % self.p)
    }

    fn trace_vector(&self) -> &Vec<u64> {
        self.trace_vec.get_or_init(|| match &self.shape {
            Shape::Base => vec![1],
            Shape::Ext { base, rel, red, .. } => {
                let bs = base.degree;
                let tb = base.trace_vector().clone();
                let rel = *rel;
                // power sums of the roots: s_k = -(Σ_{i<k} m_{r-i} s_{k-i} + k m_{r-k})
                let mcoef = |j: usize| base.neg(&red[j]);
                let mut s: Vec<Vec<u64>> = vec![base.from_int(rel as i64)];
                for k in 1..rel {
                    let mut acc = base.scale(&mcoef(rel - k), k as u64);
                    for i in 1..k {
                        base.mul_acc(&mut acc, &mcoef(rel - i), &s[k - i]);
                    }
                    s.push(base.neg(&acc));
                }
                let mut out = Vec::with_capacity(self.degree);
                for sj in &s {
                    if is_scalar(sj) {
                        out.extend(tb.iter().map(|&t| t * sj[0] % self.p));
                    } else {
                        for i in 0..bs {
                            let mut e = base.zero();
                            e[i] = 1;
                            out.push(base.trace(&base.mul(sj, &e)));
                        }
                    }
                }
                out
            }
        })
    }

    // ---- embeddings ----

    /// Image of an element of `src` in `self`.
    pub fn embed_from(self: &Arc<Self>, src: &Arc<Level>, x: &[u64]) -> Result<Vec<u64>, CoeffError> {
        if src.prec != self.prec {
            return Err(CoeffError::NoEmbedding("precisions differ".into()));
        }
        // prefix embedding along the base chain
        let mut cur = Some(self.clone());
        while let Some(l) = cur {
            if l.same(src) {
                let mut out = self.zero();
                out[..x.len()].copy_from_slice(x);
                return Ok(out);
            }
            cur = l.base().cloned();
        }
        match (&src.shape, &src.recipe) {
            (Shape::Ext { kind: ExtKind::Simple, rel, .. }, Recipe::Simple { .. }) => {
                let img = self.generator_image(src)?;
                let mut acc = self.zero();
                let mut pw = self.from_int(1);
                for j in 0..*rel {
                    self.scale_acc(&mut acc, &pw, x[j]);
                    pw = self.mul(&pw, &img);
                }
                Ok(acc)
            }
            _ => Err(CoeffError::NoEmbedding(format!(
                "no embedding of {:?} into {:?}",
                src.recipe, self.recipe
            ))),
        }
    }

    /// The lexicographically first root (mod p) of the defining polynomial of `src`,
    /// Hensel-lifted to this precision. Cached per target.
    fn generator_image(self: &Arc<Self>, src: &Arc<Level>) -> Result<Arc<Vec<u64>>, CoeffError> {
        if let Some(v) = self.links.lock().unwrap().get(&src.id) {
            return Ok(v.clone());
        }
        let f = src.defining_poly_ints();
        let res = self.residue()?;
        if !res.is_field {
            return Err(CoeffError::NoEmbedding("target residue ring is not a field".into()));
        }
        if !self.degree.is_multiple_of(f.len() - 1) {
            return Err(CoeffError::NoEmbedding(format!(
                "degree {} does not divide {}",
                f.len() - 1,
                self.degree
            )));
        }
        let size = (self.p as u128).checked_pow(self.degree as u32).unwrap_or(u128::MAX);
        if size > 1 << 22 {
            return Err(CoeffError::Budget("root search space too large".into()));
        }
        let fp: Vec<u64> = f.iter().map(|&c| c % self.p).collect();
        let mut root = None;
        for k in 0..size as u64 {
            let mut x = res.zero();
            let mut t = k;
            for xi in x.iter_mut() {
                *xi = t % self.p;
                t /= self.p;
            }
            if is_zero(&res.eval_int_poly(&fp, &x)) {
                root = Some(x);
                break;
            }
        }
        let root = root.ok_or_else(|| CoeffError::NoEmbedding("defining polynomial has no root".into()))?;
        let mut x = root;
        let d = self.eval_int_poly(&poly_derivative(&f, self.m), &x);
        let dinv = self.inverse(&d).ok_or_else(|| CoeffError::NoEmbedding("inseparable".into()))?;
        for _ in 0..=self.prec {
            let fx = self.eval_int_poly(&f, &x);
            if is_zero(&fx) {
                break;
            }
            x = self.sub(&x, &self.mul(&fx, &dinv));
        }
        let v = Arc::new(x);
        self.links.lock().unwrap().entry(src.id).or_insert(v.clone());
        Ok(v)
    }
}

fn poly_derivative(f: &[u64], m: u64) -> Vec<u64> {
    f.iter().enumerate().skip(1).map(|(i, &c)| c * i as u64 % m).collect()
}

fn cyclotomic_frobenius_exponent(p: u64, e: u64) -> u64 {
    // u ≡ 1 mod p^k, u ≡ p mod e' where e = p^k e'
    let mut pk = 1;
    while e.is_multiple_of(pk * p) {
        pk *= p;
    }
    let ep = e / pk;
    (0..e).find(|&u| u % pk == 1 % pk && u % ep == p % ep).expect("CRT solution")
}

fn trim_poly(f: &mut Vec<Vec<u64>>) {
    while f.last().is_some_and(|b| is_zero(b)) {
        f.pop();
    }
}

fn poly_sub(base: &Level, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len().max(b.len());
    let z = base.zero();
    let mut out: Vec<Vec<u64>> = (0..n)
        .map(|i| base.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim_poly(&mut out);
    out
}

fn poly_mul(base: &Level, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![base.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            base.mul_acc(&mut out[i + j], x, y);
        }
    }
    trim_poly(&mut out);
    out
}

fn poly_divrem(base: &Level, a: &[Vec<u64>], b: &[Vec<u64>]) -> Option<(Vec<Vec<u64>>, Vec<Vec<u64>>)> {
    let db = b.len() - 1;
    let lead_inv = base.field_inverse(&b[db])?;
    let mut r = a.to_vec();
    trim_poly(&mut r);
    if r.len() <= db {
        return Some((vec![], r));
    }
    let mut q = vec![base.zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let t = base.mul(&r[k], &lead_inv);
        for (i, bi) in b.iter().enumerate() {
            let prod = base.mul(&t, bi);
            r[k - db + i] = base.sub(&r[k - db + i], &prod);
        }
        q[k - db] = t;
        trim_poly(&mut r);
    }
    trim_poly(&mut q);
    Some((q, r))
}

/// `c ∈ K` with `Tr_{K/F_p}(c) = 1`, expressed at every precision by the same digits.
///
/// Above an Artin–Schreier step with generator `Y` and constant `c'` we take
/// `c = -Y^{p-1} c'`, which has trace `Tr(c') = 1`; otherwise a suitably scaled basis vector.
fn canonical_as_constant(base: &Arc<Level>) -> Result<Vec<u64>, CoeffError> {
    let field = base.residue()?;
    let c_field = match &field.shape {
        Shape::Ext { kind: ExtKind::ArtinSchreier { c }, base: below, rel, .. } => {
            let bs = below.degree;
            let mut v = field.zero();
            v[(rel - 1) * bs..].copy_from_slice(&below.neg(c));
            v
        }
        _ => {
            let i = (0..field.degree)
                .find(|&i| {
                    let mut e = field.zero();
                    e[i] = 1;
                    field.trace(&e) != 0
                })
                .expect("the trace form is nonzero on a separable extension");
            let mut e = field.zero();
            e[i] = 1;
            let t = field.trace(&e);
            e[i] = inv_mod(t, field.p).unwrap();
            e
        }
    };
    debug_assert_eq!(field.trace(&c_field), 1);
    Ok(c_field)
}
