use std::fmt;
use std::sync::Arc;

use super::arith::valuation;
use super::field::{as_solve, solve_in_child, unramified_recipe, FieldElement, FiniteField};
use super::level::{ExtKind, Level, Recipe, Shape};
use super::CoeffError;

/// A truncated coefficient ring `O/p^N`: `W(F_q)/p^N`, an Artin–Schreier tower over it,
/// or a cyclotomic quotient of one of these.
#[derive(Clone)]
pub struct CoeffRing {
    pub(crate) level: Arc<Level>,
}

/// The rings without cyclotomic steps are unramified; the name is kept for readability.
pub type UnramifiedRing = CoeffRing;

impl PartialEq for CoeffRing {
    fn eq(&self, other: &Self) -> bool {
        self.level.same(&other.level)
    }
}
impl Eq for CoeffRing {}

impl fmt::Debug for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O(p={}, deg={}, N={})", self.p(), self.degree(), self.precision())
    }
}

impl CoeffRing {
    /// `Z/p^N`.
    pub fn integers(p: u64, n: u32) -> Result<Self, CoeffError> {
        Self::unramified(p, 1, n)
    }

    /// `W(F_{p^n})/p^N`, with the lifted modulus of [`super::make_extension`].
    pub fn unramified(p: u64, n: usize, prec: u32) -> Result<Self, CoeffError> {
        if !super::arith::is_prime(p) {
            return Err(CoeffError::CompositeP(p));
        }
        if n == 0 {
            return Err(CoeffError::Domain("degree must be positive".into()));
        }
        Ok(CoeffRing { level: Level::get(&unramified_recipe(p, n), prec)? })
    }

    /// The Witt ring lifting an existing field (including Artin–Schreier towers).
    pub fn over_field(field: &FiniteField, prec: u32) -> Result<Self, CoeffError> {
        Ok(CoeffRing { level: field.level.at_prec(prec)? })
    }

    pub(crate) fn from_level(level: Arc<Level>) -> Self {
        CoeffRing { level }
    }

    pub fn p(&self) -> u64 {
        self.level.p
    }

    pub fn precision(&self) -> u32 {
        self.level.prec
    }

    /// `p^N`
    pub fn modulus_value(&self) -> u64 {
        self.level.m
    }

    /// Rank over `Z/p^N`.
    pub fn degree(&self) -> usize {
        self.level.degree
    }

    pub fn is_unramified(&self) -> bool {
        self.level.at_prec(1).map(|l| l.is_field).unwrap_or(false)
    }

    pub fn residue_field(&self) -> Result<FiniteField, CoeffError> {
        let l = self.level.residue()?;
        if !l.is_field {
            return Err(CoeffError::Domain("residue ring is not a field".into()));
        }
        Ok(FiniteField { level: l })
    }

    pub fn with_precision(&self, prec: u32) -> Result<CoeffRing, CoeffError> {
        Ok(CoeffRing { level: self.level.at_prec(prec)? })
    }

    pub fn artin_schreier_child(&self) -> Result<CoeffRing, CoeffError> {
        Ok(CoeffRing { level: self.level.as_child()? })
    }

    /// The monic defining polynomial of the top step, as coefficient blocks over the base
    /// ring (low degree first, leading 1 omitted). Empty for `Z/p^N`.
    pub fn lifted_modulus(&self) -> Vec<Vec<u64>> {
        match &self.level.shape {
            Shape::Base => vec![],
            Shape::Ext { base, red, .. } => red.iter().map(|b| base.neg(b)).collect(),
        }
    }

    /// The ring below the top step.
    pub fn base_ring(&self) -> Option<CoeffRing> {
        self.level.base().map(|b| CoeffRing { level: b.clone() })
    }

    pub fn zero(&self) -> RingElement {
        self.wrap(self.level.zero())
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> RingElement {
        self.wrap(self.level.from_int(k))
    }

    pub fn generator(&self) -> RingElement {
        self.wrap(self.level.generator())
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<RingElement, CoeffError> {
        if coeffs.len() != self.degree() {
            return Err(CoeffError::Domain(format!(
                "expected {} coefficients, got {}",
                self.degree(),
                coeffs.len()
            )));
        }
        let m = self.modulus_value();
        Ok(self.wrap(coeffs.iter().map(|&c| c % m).collect()))
    }

    pub(crate) fn wrap(&self, coeffs: Vec<u64>) -> RingElement {
        RingElement { ring: self.clone(), coeffs, prec: self.precision() }
    }

    /// Coordinatewise lift of a residue element (digits in `[0, p)`).
    pub fn lift(&self, a: &FieldElement) -> Result<RingElement, CoeffError> {
        let res = self.level.residue()?;
        let coeffs = res.embed_from(&a.field.level, &a.coeffs)?;
        Ok(self.wrap(coeffs))
    }

    pub fn reduce(&self, x: &RingElement) -> Result<FieldElement, CoeffError> {
        let f = self.residue_field()?;
        Ok(f.wrap(x.coeffs.iter().map(|&c| c % self.p()).collect()))
    }

    /// Image of `x` under the embedding of its ring into this one.
    pub fn embed(&self, x: &RingElement) -> Result<RingElement, CoeffError> {
        if x.ring == *self {
            return Ok(x.clone());
        }
        let src = if x.ring.precision() == self.precision() {
            x.ring.level.clone()
        } else {
            x.ring.level.at_prec(self.precision())?
        };
        let mut c = x.coeffs.clone();
        src.reduce(&mut c);
        let coeffs = self.level.embed_from(&src, &c)?;
        Ok(RingElement { ring: self.clone(), coeffs, prec: x.prec.min(self.precision()) })
    }

    pub fn teichmuller(&self, a: &FieldElement) -> Result<RingElement, CoeffError> {
        teichmuller_in(self, a)
    }
}

/// An element with `prec` guaranteed p-adic digits (`prec <= N`).
#[derive(Clone)]
pub struct RingElement {
    pub(crate) ring: CoeffRing,
    pub(crate) coeffs: Vec<u64>,
    pub(crate) prec: u32,
}

impl PartialEq for RingElement {
    /// Equality of the stored residues modulo `p^N` (precision metadata ignored).
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coeffs == other.coeffs
    }
}
impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.coeffs, self.prec)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{body} (mod {}^{})", self.ring.p(), self.prec)
    }
}

impl RingElement {
    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn known_precision(&self) -> u32 {
        self.prec
    }

    pub fn with_known_precision(mut self, prec: u32) -> Self {
        self.prec = prec.min(self.ring.precision());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Agreement modulo `p^k`.
    pub fn eq_mod(&self, other: &RingElement, k: u32) -> bool {
        let pk = self.ring.p().pow(k.min(self.ring.precision()));
        self.ring == other.ring && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a % pk == b % pk)
    }

    /// Minimum coordinate valuation, capped at the ring precision.
    pub fn valuation(&self) -> u32 {
        let n = self.ring.precision();
        self.coeffs
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| valuation(c, self.ring.p()).min(n))
            .min()
            .unwrap_or(n)
    }

    fn lvl(&self) -> &Level {
        &self.ring.level
    }

    fn binop(&self, other: &RingElement, f: impl Fn(&Level, &[u64], &[u64]) -> Vec<u64>) -> RingElement {
        assert!(self.ring == other.ring, "ring mismatch: {:?} vs {:?}", self.ring, other.ring);
        RingElement {
            ring: self.ring.clone(),
            coeffs: f(self.lvl(), &self.coeffs, &other.coeffs),
            prec: self.prec.min(other.prec),
        }
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.binop(other, Level::add)
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.binop(other, Level::sub)
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.binop(other, Level::mul)
    }

    pub fn neg(&self) -> RingElement {
        RingElement { coeffs: self.lvl().neg(&self.coeffs), ..self.clone() }
    }

    pub fn scale(&self, k: i64) -> RingElement {
        let m = self.ring.modulus_value();
        RingElement { coeffs: self.lvl().scale(&self.coeffs, k.rem_euclid(m as i64) as u64), ..self.clone() }
    }

    pub fn pow(&self, e: u128) -> RingElement {
        RingElement { coeffs: self.lvl().pow(&self.coeffs, e), ..self.clone() }
    }

    pub fn inverse(&self) -> Result<RingElement, CoeffError> {
        let c = self.lvl().inverse(&self.coeffs).ok_or(CoeffError::NotAUnit)?;
        Ok(RingElement { coeffs: c, ..self.clone() })
    }

    pub fn is_unit(&self) -> bool {
        self.lvl().inverse(&self.coeffs).is_some()
    }

    /// Exact division by `p`; one digit of precision is lost.
    pub fn div_p(&self) -> Result<RingElement, CoeffError> {
        let p = self.ring.p();
        if self.coeffs.iter().any(|&c| c % p != 0) {
            return Err(CoeffError::Domain("element is not divisible by p".into()));
        }
        let m = self.ring.modulus_value();
        Ok(RingElement {
            coeffs: self.coeffs.iter().map(|&c| (c / p) % m).collect(),
            prec: self.prec.saturating_sub(1),
            ring: self.ring.clone(),
        })
    }

    /// Multiplication by `p^k`; the result is known to `min(N, prec + k)` digits.
    pub fn mul_p_pow(&self, k: u32) -> RingElement {
        let n = self.ring.precision();
        let s = if k >= n { 0 } else { self.ring.p().pow(k) };
        RingElement {
            coeffs: self.lvl().scale(&self.coeffs, s),
            prec: (self.prec + k).min(n),
            ring: self.ring.clone(),
        }
    }

    /// The canonical Frobenius lift.
    ///
    /// In an Artin–Schreier tower, the p-adic digit `k` is evaluated at precision `N - k` in
    /// the smallest step that contains it, which keeps lifted towers tractable.
    pub fn frobenius(&self) -> RingElement {
        RingElement { coeffs: ring_frobenius_raw(&self.ring.level, &self.coeffs), ..self.clone() }
    }

    /// `φ^k`
    pub fn frobenius_pow(&self, k: usize) -> RingElement {
        (0..k).fold(self.clone(), |x, _| x.frobenius())
    }

    pub fn reduce(&self) -> Result<FieldElement, CoeffError> {
        self.ring.reduce(self)
    }

    /// The integer value when the element lies in `Z/p^N`.
    pub fn as_integer(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    /// Reduction to a lower-precision copy of the ring.
    pub fn truncate(&self, prec: u32) -> Result<RingElement, CoeffError> {
        let ring = self.ring.with_precision(prec)?;
        let m = ring.modulus_value();
        Ok(RingElement {
            coeffs: self.coeffs.iter().map(|&c| c % m).collect(),
            prec: self.prec.min(prec),
            ring,
        })
    }

    /// Reinterprets the stored residues in a higher-precision copy (an arbitrary lift).
    pub fn lift_precision(&self, prec: u32) -> Result<RingElement, CoeffError> {
        let ring = self.ring.with_precision(prec)?;
        Ok(RingElement { coeffs: self.coeffs.clone(), prec: self.prec, ring })
    }
}

pub(crate) fn ring_frobenius_raw(level: &Arc<Level>, a: &[u64]) -> Vec<u64> {
    let is_as = matches!(&level.shape, Shape::Ext { kind: ExtKind::ArtinSchreier { .. }, .. });
    if level.prec == 1 || !is_as {
        return level.frobenius(a);
    }
    let p = level.p;
    let n = level.prec;
    let mut out = level.zero();
    let mut pk = 1u64;
    for k in 0..n {
        let digit: Vec<u64> = a.iter().map(|&c| (c / pk) % p).collect();
        if digit.iter().any(|&d| d != 0) {
            let at = level.at_prec(n - k).expect("lower precision of an existing level");
            let small = at.minimal_level(&digit);
            let f = small.frobenius(&digit[..small.degree]);
            for (o, &x) in out.iter_mut().zip(&f) {
                *o = (*o + x * pk) % level.m;
            }
        }
        pk *= p;
    }
    out
}

/// The Teichmüller representative of a nonzero residue element.
pub fn teichmuller(ring: &CoeffRing, a: &FieldElement) -> Result<RingElement, CoeffError> {
    teichmuller_in(ring, a)
}

fn teichmuller_in(ring: &CoeffRing, a: &FieldElement) -> Result<RingElement, CoeffError> {
    if a.is_zero() {
        return Err(CoeffError::ZeroInput);
    }
    let mut x = ring.lift(a)?;
    let d = ring.residue_field()?.degree();
    // x -> x^q is a contraction towards the root of unity
    for _ in 0..ring.precision() {
        for _ in 0..d {
            x = x.pow(ring.p() as u128);
        }
    }
    Ok(x)
}

/// Solves `(1 - φ) s = r` digit by digit, climbing the Artin–Schreier tower whenever a
/// residual digit has nonzero trace. The result lives in the (possibly larger) ring
/// reached at the end.
pub fn solve_one_minus_frobenius(r: &RingElement) -> Result<RingElement, CoeffError> {
    let n = r.ring.precision();
    let p = r.ring.p();
    if !r.ring.is_unramified() {
        return Err(CoeffError::Domain("1 - φ is only solved over unramified rings".into()));
    }
    let mut recipe: Recipe = r.ring.level.recipe.clone();
    let mut residual = r.coeffs.clone();
    let mut digits: Vec<Vec<u64>> = Vec::with_capacity(n as usize);
    for k in 0..n {
        let lvl = Level::get(&recipe, n - k)?;
        let field = lvl.residue()?;
        let abar: Vec<u64> = residual.iter().map(|&c| c % p).collect();
        let sbar = match as_solve(&field, &abar) {
            Some(s) => s,
            None => {
                let child = field.as_child()?;
                let s = solve_in_child(&field, &child, &abar);
                recipe = child.recipe.clone();
                residual.resize(child.degree, 0);
                s
            }
        };
        let lvl = Level::get(&recipe, n - k)?;
        if k + 1 < n {
            let phi = lvl.frobenius(&sbar);
            let t = lvl.add(&lvl.sub(&residual, &sbar), &phi);
            let next_m = p.pow(n - k - 1);
            residual = t
                .iter()
                .map(|&c| {
                    debug_assert_eq!(c % p, 0);
                    (c / p) % next_m
                })
                .collect();
        }
        digits.push(sbar);
    }
    let top = Level::get(&recipe, n)?;
    let mut s = top.zero();
    let mut pk = 1u64;
    for d in &digits {
        for (o, &x) in s.iter_mut().zip(d) {
            *o = (*o + x * pk) % top.m;
        }
        pk *= p;
    }
    Ok(RingElement { ring: CoeffRing { level: top }, coeffs: s, prec: r.prec })
}


#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(ring: &CoeffRing, rng: &mut ChaCha8Rng) -> RingElement {
        let m = ring.modulus_value();
        let c: Vec<u64> = (0..ring.degree()).map(|_| rng.gen_range(0..m)).collect();
        ring.element(&c).unwrap()
    }

    #[test]
    fn frobenius_lift_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n, prec) in [(3u64, 2usize, 4u32), (2, 3, 5), (5, 2, 3)] {
            let o = CoeffRing::unramified(p, n, prec).unwrap();
            let g = o.generator();
            assert!(g.frobenius().eq_mod(&g.pow(p as u128), 1));
            for _ in 0..20 {
                let x = random(&o, &mut rng);
                let y = random(&o, &mut rng);
                assert!(x.frobenius().eq_mod(&x.pow(p as u128), 1));
                assert_eq!(x.frobenius_pow(n), x);
                assert_eq!(x.mul(&y).frobenius(), x.frobenius().mul(&y.frobenius()));
            }
            let z = o.from_int(17);
            assert_eq!(z.frobenius(), z);
        }
    }

    #[test]
    fn tower_frobenius_is_a_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let o = CoeffRing::unramified(3, 1, 3).unwrap().artin_schreier_child().unwrap();
        let o2 = o.artin_schreier_child().unwrap();
        for ring in [&o, &o2] {
            for _ in 0..10 {
                let x = random(ring, &mut rng);
                let y = random(ring, &mut rng);
                assert!(x.frobenius().eq_mod(&x.pow(3), 1));
                assert_eq!(x.mul(&y).frobenius(), x.frobenius().mul(&y.frobenius()));
                assert_eq!(x.frobenius_pow(ring.degree()), x);
            }
        }
    }

    #[test]
    fn teichmuller_roots() {
        let o = CoeffRing::integers(3, 3).unwrap();
        let f = o.residue_field().unwrap();
        assert_eq!(teichmuller(&o, &f.from_int(2)).unwrap().as_integer(), Some(26));
        assert_eq!(teichmuller(&o, &f.one()).unwrap(), o.one());
        assert!(matches!(teichmuller(&o, &f.zero()), Err(CoeffError::ZeroInput)));
        let o9 = CoeffRing::unramified(3, 2, 2).unwrap();
        let f9 = o9.residue_field().unwrap();
        for a in f9.elements().skip(1) {
            let w = teichmuller(&o9, &a).unwrap();
            assert_eq!(w.pow(8), o9.one());
            assert_eq!(w.reduce().unwrap(), a);
            assert_eq!(w.frobenius(), w.pow(3));
        }
    }

    #[test]
    fn one_minus_phi_examples() {
        let o = CoeffRing::integers(3, 2).unwrap();
        let s = solve_one_minus_frobenius(&o.one()).unwrap();
        assert_eq!(s.ring().degree(), 9);
        let one = s.ring().one();
        assert_eq!(s.sub(&s.frobenius()), one);
        assert!(solve_one_minus_frobenius(&o.zero()).unwrap().is_zero());

        let o9 = CoeffRing::unramified(3, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let r = random(&o9, &mut rng);
            let s = solve_one_minus_frobenius(&r).unwrap();
            let r2 = s.ring().embed(&r).unwrap();
            assert_eq!(s.sub(&s.frobenius()), r2);
        }
    }

    #[test]
    fn kernel_of_one_minus_phi_is_integers() {
        let o = CoeffRing::unramified(3, 2, 2).unwrap();
        let mut kernel = 0;
        for a in 0..9u64 {
            for b in 0..9u64 {
                let s = o.element(&[a, b]).unwrap();
                if s.sub(&s.frobenius()).is_zero() {
                    kernel += 1;
                    assert_eq!(b, 0);
                }
            }
        }
        assert_eq!(kernel, 9);
    }

    #[test]
    fn deep_tower_solve() {
        let o = CoeffRing::unramified(5, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = std::time::Instant::now();
        for _ in 0..5 {
            let r = random(&o, &mut rng);
            let s = solve_one_minus_frobenius(&r).unwrap();
            eprintln!("reached degree {}", s.ring().degree());
            let r2 = s.ring().embed(&r).unwrap();
            assert_eq!(s.sub(&s.frobenius()), r2);
        }
        eprintln!("deep tower: degree 2500, 5 solves in {:?}", t.elapsed());
    }
}
