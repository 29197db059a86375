use std::sync::Arc;

use super::characters::CharacterTable;
use super::{assertion_precision, gamma_full, LogDetError};
use crate::coeff::arith::{factorial_valuation, inv_mod, valuation};
use crate::coeff::{cyclotomic_extend, scalar_log, CoeffRing, CyclotomicRing, RingElement};
use crate::descent::{Scenario, VerificationReport};
use crate::groupring::{ClassFunction, GroupRingElement, GroupRingMatrix};
use crate::groups::Group;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomKind {
    Multiplicative,
    Additive,
}

/// A function on the irreducible characters, indexed like the character table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    pub kind: HomKind,
    pub values: Vec<RingElement>,
}

impl HomElement {
    pub fn precision(&self) -> u32 {
        self.values.first().map_or(0, |v| v.ring().precision())
    }

    pub fn eq_mod(&self, other: &Self, k: u32) -> bool {
        self.kind == other.kind
            && self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| {
                let pk = a.ring().p().pow(k);
                a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| x % pk == y % pk)
            })
    }

    /// Largest `k ≤ precision` with agreement mod `p^k`.
    pub fn agreement(&self, other: &Self) -> u32 {
        (0..=self.precision().min(other.precision())).rev().find(|&k| self.eq_mod(other, k)).unwrap_or(0)
    }

    /// Pointwise product (multiplicative) or sum (additive).
    pub fn combine(&self, other: &Self) -> Self {
        assert_eq!(self.kind, other.kind);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match self.kind {
                HomKind::Multiplicative => a.mul(b),
                HomKind::Additive => a.add(b),
            })
            .collect();
        HomElement { kind: self.kind, values }
    }

    pub fn truncate(&self, prec: u32) -> Result<Self, LogDetError> {
        let values = self.values.iter().map(|v| v.truncate(prec)).collect::<Result<_, _>>()?;
        Ok(HomElement { kind: self.kind, values })
    }

    /// `F̃(f)(χ) = F(f(χ^{F^{-1}}))`.
    pub fn frobenius_twist(&self, g: &Group, table: &CharacterTable, vr: &CyclotomicRing) -> Result<Self, LogDetError> {
        let pm = g.power_map_on_classes(inverse_frob_exponent(vr, table) as i64);
        let values = (0..table.len())
            .map(|i| Ok(self.values[table.galois_conjugate(i, &pm)?].frobenius()))
            .collect::<Result<_, LogDetError>>()?;
        Ok(HomElement { kind: self.kind, values })
    }
}

fn inverse_frob_exponent(vr: &CyclotomicRing, table: &CharacterTable) -> u64 {
    let e = table.exponent;
    if e == 1 {
        return 1;
    }
    inv_mod(vr.frob_exponent % e, e).expect("Frobenius exponent is prime to e")
}

/// `O[ζ_e]` with `e` the exponent of the group.
pub fn value_ring(base: &CoeffRing, table: &CharacterTable) -> Result<CyclotomicRing, LogDetError> {
    Ok(cyclotomic_extend(base, table.exponent)?)
}

/// `Tr(c)(χ) = Σ_c c_c χ(c)` for a class function holding class sums.
pub fn tr_class_function(cf: &ClassFunction, table: &CharacterTable, vr: &CyclotomicRing) -> Result<HomElement, LogDetError> {
    let coeffs: Vec<RingElement> =
        (0..cf.group().num_classes()).map(|c| vr.ring.embed(&cf.get(c))).collect::<Result<_, _>>()?;
    let values = (0..table.len())
        .map(|i| coeffs.iter().enumerate().fold(vr.ring.zero(), |acc, (c, x)| acc.add(&x.mul(&table.value(vr, i, c)))))
        .collect();
    Ok(HomElement { kind: HomKind::Additive, values })
}

/// `tr ρ_χ(a) = Σ_g a_g χ(g)`.
pub fn tr_eval(a: &GroupRingElement, table: &CharacterTable, i: usize, vr: &CyclotomicRing) -> Result<RingElement, LogDetError> {
    Ok(tr_class_function(&a.classproj(), table, vr)?.values[i].clone())
}

pub fn tr_hom(a: &GroupRingElement, table: &CharacterTable, vr: &CyclotomicRing) -> Result<HomElement, LogDetError> {
    tr_class_function(&a.classproj(), table, vr)
}

/// The top elementary symmetric function from power sums `p_1..p_d`.
fn newton_top(ps: &[RingElement]) -> Result<RingElement, LogDetError> {
    let ring = ps[0].ring().clone();
    let p = ring.p();
    let m = ring.modulus_value();
    let mut e = vec![ring.one()];
    for k in 1..=ps.len() {
        let mut s = ring.zero();
        for i in 1..=k {
            let t = e[k - i].mul(&ps[i - 1]);
            s = if i % 2 == 1 { s.add(&t) } else { s.sub(&t) };
        }
        let v = valuation(k as u64, p);
        for _ in 0..v {
            s = s.div_p().map_err(|_| LogDetError::NewtonDivisionFailure(k as u64))?;
        }
        let unit = (k as u64 / p.pow(v)) % m;
        e.push(s.scale(inv_mod(unit, m).unwrap() as i64));
    }
    Ok(e.pop().unwrap())
}

/// `det ρ_χ(g)` from the power traces `χ(g^k)`.
pub fn det_character(g: &Group, table: &CharacterTable, i: usize, x: usize, vr: &CyclotomicRing) -> Result<RingElement, LogDetError> {
    let d = table.characters[i].degree;
    let prec = vr.ring.precision();
    let guard = factorial_valuation(d, vr.ring.p());
    let vw = vr.with_precision(prec + guard)?;
    let classes = table.power_classes(g, x);
    let ps: Vec<RingElement> = (1..=d as usize).map(|k| table.value(&vw, i, classes[k % classes.len()])).collect();
    Ok(newton_top(&ps)?.truncate(prec)?)
}

/// Power traces `tr(u^k, χ)` for `k = 1..=d`, all characters at once.
fn power_traces(u: &GroupRingElement, d: u64, table: &CharacterTable, vr: &CyclotomicRing) -> Result<Vec<HomElement>, LogDetError> {
    let mut out = Vec::with_capacity(d as usize);
    let mut pw = u.clone();
    for k in 1..=d {
        if k > 1 {
            pw = pw.mul(u);
        }
        out.push(tr_hom(&pw, table, vr)?);
    }
    Ok(out)
}

/// `Det(u)(χ) = det ρ_χ(u)` for the canonical lift of `u`, at the value ring's precision.
pub fn det_eval(u: &GroupRingElement, table: &CharacterTable, i: usize, vr: &CyclotomicRing) -> Result<RingElement, LogDetError> {
    Ok(det_hom(u, table, vr)?.values[i].clone())
}

pub fn det_hom(u: &GroupRingElement, table: &CharacterTable, vr: &CyclotomicRing) -> Result<HomElement, LogDetError> {
    if !u.is_unit() {
        return Err(LogDetError::NotAUnit);
    }
    let prec = vr.ring.precision();
    let p = vr.ring.p();
    let dmax = table.characters.iter().map(|c| c.degree).max().unwrap_or(1);
    let guard = factorial_valuation(dmax, p);
    let vw = vr.with_precision(prec + guard)?;
    let uw = u.with_precision(prec + guard)?;
    let traces = power_traces(&uw, dmax, table, &vw)?;
    let values = (0..table.len())
        .map(|i| {
            let d = table.characters[i].degree as usize;
            let ps: Vec<RingElement> = traces[..d].iter().map(|t| t.values[i].clone()).collect();
            Ok(newton_top(&ps)?.truncate(prec)?)
        })
        .collect::<Result<_, LogDetError>>()?;
    Ok(HomElement { kind: HomKind::Multiplicative, values })
}

/// `Det(M)(χ) = det ρ_χ(M)` for a square matrix over `O[G]`, from traces of `M^k`.
pub fn det_hom_matrix(m: &GroupRingMatrix, table: &CharacterTable, vr: &CyclotomicRing) -> Result<HomElement, LogDetError> {
    let prec = vr.ring.precision();
    let p = vr.ring.p();
    let k = m.size as u64;
    let dmax = k * table.characters.iter().map(|c| c.degree).max().unwrap_or(1);
    let guard = factorial_valuation(dmax, p);
    let vw = vr.with_precision(prec + guard)?;
    let entries = m
        .entries
        .iter()
        .map(|row| row.iter().map(|x| x.with_precision(prec + guard)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let mw = GroupRingMatrix::new(entries)?;
    let mut traces = Vec::with_capacity(dmax as usize);
    let mut pw = mw.clone();
    for j in 1..=dmax {
        if j > 1 {
            pw = pw.mul(&mw);
        }
        traces.push(tr_hom(&pw.trace(), table, &vw)?);
    }
    let values = (0..table.len())
        .map(|i| {
            let d = (k * table.characters[i].degree) as usize;
            let ps: Vec<RingElement> = traces[..d].iter().map(|t| t.values[i].clone()).collect();
            Ok(newton_top(&ps)?.truncate(prec)?)
        })
        .collect::<Result<_, LogDetError>>()?;
    Ok(HomElement { kind: HomKind::Multiplicative, values })
}

/// `(s, q − 1)`: every unit `x` of the value ring has `x^{(q−1)p^s} ≡ 1 mod p`.
fn value_log_exponents(vr: &CyclotomicRing, table: &CharacterTable) -> (u32, u128) {
    let p = vr.ring.p();
    let mut e = table.exponent;
    let mut pk = 1u64;
    while e.is_multiple_of(p) {
        e /= p;
        pk *= p;
    }
    let ram = if pk == 1 { 1 } else { pk / p * (p - 1) };
    let mut s = 0;
    while p.pow(s) < ram {
        s += 1;
    }
    // residue degree of the prime-to-p cyclotomic part
    let mut ord = 1u32;
    if e > 1 {
        let mut x = p % e;
        while x != 1 {
            x = x * p % e;
            ord += 1;
        }
    }
    let f = vr.base.degree() as u32 * ord;
    (s, (p as u128).pow(f) - 1)
}

/// Number of digits `gamma_hom` loses.
pub fn gamma_hom_loss(vr: &CyclotomicRing, table: &CharacterTable) -> u32 {
    value_log_exponents(vr, table).0 + 1
}

/// `Γ_Hom(f) = (1/p)(p − F̃ψ_p)(log ∘ f)`, reported at `prec − s − 1`.
pub fn gamma_hom(f: &HomElement, g: &Group, table: &CharacterTable, vr: &CyclotomicRing) -> Result<HomElement, LogDetError> {
    if f.kind != HomKind::Multiplicative {
        return Err(LogDetError::Domain("Γ_Hom takes a multiplicative function".into()));
    }
    let p = vr.ring.p();
    let prec = vr.ring.precision();
    let (s, qm1) = value_log_exponents(vr, table);
    if prec < s + 2 {
        return Err(LogDetError::PrecisionExhausted(format!("need more than {} digits", s + 1)));
    }
    let m = vr.ring.modulus_value();
    let big = qm1 * (p as u128).pow(s);
    let logs: Vec<RingElement> = f
        .values
        .iter()
        .map(|x| {
            if x.ring() != &vr.ring {
                return Err(LogDetError::GroupRing(crate::groupring::GroupRingError::Mismatch));
            }
            scalar_log(&x.pow(big)).map_err(|_| LogDetError::Domain("value is not a unit".into()))
        })
        .collect::<Result<_, _>>()?;
    let adams = table.adams_matrix(&g.power_map_on_classes(p as i64))?;
    let pm = g.power_map_on_classes(inverse_frob_exponent(vr, table) as i64);
    let inv_q = inv_mod((qm1 % m as u128) as u64, m).expect("q − 1 is prime to p");
    let mut values = Vec::with_capacity(table.len());
    for i in 0..table.len() {
        let ic = table.galois_conjugate(i, &pm)?;
        let psi = adams[ic].iter().zip(&logs).fold(vr.ring.zero(), |acc, (&a, l)| acc.add(&l.scale(a)));
        let mut t = logs[i].sub(&psi.frobenius().div_p().map_err(|_| LogDetError::Domain("ψ_p log f is not divisible by p".into()))?);
        for _ in 0..s {
            t = t.div_p().map_err(|_| LogDetError::Domain("Γ_Hom value is not integral".into()))?;
        }
        values.push(t.scale(inv_q as i64).truncate(prec - s - 1)?);
    }
    Ok(HomElement { kind: HomKind::Additive, values })
}

/// Representatives `ω·g` of `μ_R × G^{ab}`.
pub fn torsion_representatives(ring: &CoeffRing, group: &Arc<Group>) -> Result<Vec<GroupRingElement>, LogDetError> {
    let field = ring.residue_field()?;
    let (_, q, proj) = group.abelianization();
    let mut transversal = vec![usize::MAX; q.order()];
    for (x, &c) in proj.iter().enumerate() {
        if transversal[c] == usize::MAX {
            transversal[c] = x;
        }
    }
    let mut out = Vec::new();
    for a in field.elements().filter(|a| !a.is_zero()) {
        let w = ring.teichmuller(&a)?;
        for &x in &transversal {
            out.push(GroupRingElement::group_element(ring, group, x).scale(&w));
        }
    }
    Ok(out)
}

/// Det separates the elements of `μ_R × G^{ab}`; returns the number of elements enumerated.
pub fn torsion_det_injective(ring: &CoeffRing, group: &Arc<Group>) -> Result<(usize, bool), LogDetError> {
    let table = super::character_table(group)?;
    let vr = value_ring(ring, &table)?;
    let reps = torsion_representatives(ring, group)?;
    let mut seen: Vec<Vec<Vec<u64>>> = Vec::with_capacity(reps.len());
    for u in &reps {
        let d = det_hom(u, &table, &vr)?;
        seen.push(d.values.iter().map(|v| v.coeffs().to_vec()).collect());
    }
    let n = seen.len();
    seen.sort();
    seen.dedup();
    Ok((n, seen.len() == n))
}

/// Checks `Tr(Γ(u)) = Γ_Hom(Det(u))` on every unit and that Det is injective on torsion.
pub fn commutation_check(units: &[GroupRingElement], scenario: Scenario) -> VerificationReport {
    let mut report = VerificationReport::new("commutation", scenario);
    let Some(first) = units.first() else {
        report.note("no units supplied");
        return report;
    };
    let ring = first.ring().clone();
    let group = first.group().clone();
    let n = ring.precision();
    let p = ring.p();
    let a = assertion_precision(p, n);
    report.precision_used = Some(a);
    let mut run = || -> Result<(), LogDetError> {
        let table = super::character_table(&group)?;
        let vr_n = value_ring(&ring, &table)?;
        let loss = gamma_hom_loss(&vr_n, &table);
        let vr_w = value_ring(&ring.with_precision(n + loss)?, &table)?;
        let mut worst = n;
        for (k, u) in units.iter().enumerate() {
            let lhs = tr_class_function(&gamma_full(u)?, &table, &vr_n)?;
            let rhs = gamma_hom(&det_hom(&u.with_precision(n + loss)?, &table, &vr_w)?, &group, &table, &vr_w)?.truncate(n)?;
            let agree = lhs.agreement(&rhs);
            worst = worst.min(agree);
            if agree < a {
                report.fail(format!("unit {k}: Tr∘Γ and Γ_Hom∘Det agree only mod p^{agree}"));
            }
        }
        report.note(format!("{} units, worst agreement mod p^{worst}", units.len()));
        let (count, injective) = torsion_det_injective(&ring, &group)?;
        if injective {
            report.note(format!("Det injective on {count} torsion elements"));
        } else {
            report.fail(format!("Det not injective on the {count} torsion elements"));
        }
        Ok(())
    };
    if let Err(e) = run() {
        report.error(e);
    }
    report
}
