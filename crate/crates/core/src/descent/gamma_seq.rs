use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Scenario, VerificationReport};
use crate::budget::Budget;
use crate::coeff::{CoeffRing, RingElement};
use crate::groupring::{
    i_star, random_coeff, random_unit_with, transfer_matrix, ClassFunction, GroupRingElement, UnitKind,
};
use crate::groups::Group;
use crate::linalg::{kernel_mod, solve_span, PrimePower};
use crate::logdet::{
    assertion_precision, character_table, commutation_check, det_hom, det_hom_matrix, gamma_full, gamma_hom,
    gamma_hom_loss, tr_class_function, value_ring, HomElement, LogDetError,
};

fn frobenius_cf(cf: &ClassFunction, times: usize) -> ClassFunction {
    let vals: Vec<RingElement> = (0..cf.group().num_classes()).map(|c| cf.get(c).frobenius_pow(times)).collect();
    ClassFunction::from_coefficients(cf.ring(), cf.group(), &vals).unwrap()
}

fn frobenius_gr(u: &GroupRingElement, times: usize) -> GroupRingElement {
    (0..times).fold(u.clone(), |a, _| a.frobenius_coefficients())
}

fn reduce(v: &[u64], m: u64) -> Vec<u64> {
    v.iter().map(|&x| x % m).collect()
}

fn random_class_function(ring: &CoeffRing, g: &Arc<Group>, rng: &mut ChaCha8Rng) -> ClassFunction {
    let vals: Vec<RingElement> = (0..g.num_classes()).map(|_| random_coeff(ring, rng)).collect();
    ClassFunction::from_coefficients(ring, g, &vals).unwrap()
}

/// `log_p` of the exponent of `G^{ab}` (its p-part).
fn abelian_exponent_log(g: &Group, p: u64) -> u32 {
    g.abelianization().0.p_exponents(p).into_iter().max().unwrap_or(0)
}

/// Transversal of `G → G^{ab}`.
fn abelian_transversal(g: &Group) -> Vec<usize> {
    let (_, q, proj) = g.abelianization();
    let mut t = vec![usize::MAX; q.order()];
    for (x, &c) in proj.iter().enumerate() {
        if t[c] == usize::MAX {
            t[c] = x;
        }
    }
    t
}

/// Γ images of a family of units and all their Frobenius conjugates, as coordinates mod `p^a`.
struct GammaSpan {
    ring: CoeffRing,
    units: Vec<GroupRingElement>,
    /// `(unit index, Frobenius power)` per generator
    index: Vec<(usize, usize)>,
    gens: Vec<Vec<u64>>,
}

impl GammaSpan {
    fn build(ring: &CoeffRing, g: &Arc<Group>, count: usize, a: u32, rng: &mut ChaCha8Rng) -> Result<Self, LogDetError> {
        let d = ring.degree();
        let pa = ring.p().pow(a);
        let mut units = Vec::with_capacity(count);
        let mut index = Vec::new();
        let mut gens = Vec::new();
        for i in 0..count {
            let u = random_unit_with(ring, g, UnitKind::General, rng)?;
            let gu = gamma_full(&u)?;
            for j in 0..d {
                gens.push(reduce(frobenius_cf(&gu, j).coordinates(), pa));
                index.push((i, j));
            }
            units.push(u);
        }
        Ok(GammaSpan { ring: ring.clone(), units, index, gens })
    }

    /// `Π x_t^{c_t}` over the generators, sharing work across base-p digits of the exponents.
    fn assemble(&self, c: &[u64]) -> GroupRingElement {
        let group = self.units[0].group();
        let one = GroupRingElement::one(&self.ring, group);
        let p = self.ring.p();
        let digits = c.iter().map(|&x| crate::coeff::arith::floor_log(x.max(1), p) + 1).max().unwrap_or(1);
        let mut conj: Vec<Option<GroupRingElement>> = vec![None; c.len()];
        let mut u = one.clone();
        for k in (0..digits).rev() {
            u = u.pow(p as u128);
            // A_k = Π_δ (Π_{digit_k(c_t) = δ} x_t)^δ
            let mut by_digit: Vec<GroupRingElement> = vec![one.clone(); p as usize];
            for (t, &ct) in c.iter().enumerate() {
                let dk = (ct / p.pow(k)) % p;
                if dk == 0 {
                    continue;
                }
                let x = conj[t].get_or_insert_with(|| {
                    let (i, j) = self.index[t];
                    frobenius_gr(&self.units[i], j)
                });
                by_digit[dk as usize] = by_digit[dk as usize].mul(x);
            }
            // Π_δ B_δ^δ via the suffix-product trick: Σ_δ suffix products
            let mut running = one.clone();
            for b in by_digit.iter().skip(1).rev() {
                running = running.mul(b);
                u = u.mul(&running);
            }
        }
        u
    }
}

/// Smallest `b` with `Det(u) ≡ Det(τ)` mod `p^b`, maximized over torsion `τ = ω·g`.
fn torsion_agreement(u: &GroupRingElement, transversal_dets: &[HomElement], vr: &crate::coeff::CyclotomicRing, table: &crate::logdet::CharacterTable) -> Result<u32, LogDetError> {
    let ring = u.ring();
    let omega = ring.teichmuller(&u.aug().reduce()?)?;
    let w = vr.from_base(&omega)?;
    let du = det_hom(u, table, vr)?;
    let mut best = 0;
    for dg in transversal_dets {
        let b = (0..table.len())
            .map(|i| {
                let t = dg.values[i].mul(&w.pow(table.characters[i].degree as u128));
                du.values[i].sub(&t).valuation()
            })
            .min()
            .unwrap_or(vr.ring.precision());
        best = best.max(b);
    }
    Ok(best)
}

/// Surjectivity and kernel of `Γ: K_1(O[G]) → O[𝒞_G]` mod `p^a`, extending the residue field
/// along the Artin–Schreier tower until every target is hit.
pub fn check_gamma_sequence(g: &Arc<Group>, sc: &Scenario) -> VerificationReport {
    let claim = "gamma-seq";
    if sc.p == 2 {
        return VerificationReport::skipped(claim, sc.clone(), "the integral logarithm sequence is only asserted for odd p");
    }
    if !g.is_p_group(sc.p) {
        return VerificationReport::skipped(claim, sc.clone(), format!("{} is not a {}-group", g.name(), sc.p));
    }
    let a = assertion_precision(sc.p, sc.precision);
    if a == 0 {
        return VerificationReport::skipped(claim, sc.clone(), "precision leaves no reliable Γ digits");
    }
    let mut rep = VerificationReport::new(claim, sc.clone());
    rep.precision_used = Some(a);
    rep.finite_level = true;
    if let Err(e) = gamma_sequence_inner(g, sc, a, &mut rep) {
        rep.error(e);
    }
    rep
}

fn gamma_sequence_inner(g: &Arc<Group>, sc: &Scenario, a: u32, rep: &mut VerificationReport) -> Result<(), LogDetError> {
    let p = sc.p;
    let pp = PrimePower::new(p, a);
    let base = CoeffRing::unramified(p, sc.n_r, sc.precision)?;
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let r = g.num_classes();
    let targets: Vec<ClassFunction> = (0..sc.samples).map(|_| random_class_function(&base, g, &mut rng)).collect();
    let kmax = abelian_exponent_log(g, p) + 1;
    let mut pending: Vec<usize> = (0..targets.len()).collect();
    let mut resolved: BTreeMap<usize, usize> = BTreeMap::new();
    let mut ring = base.clone();
    let mut span;
    let mut k = 0;
    loop {
        if ring.degree() > Budget::global().tower_degree {
            return Err(LogDetError::BudgetExceeded(format!("tower degree {}", ring.degree())));
        }
        span = GammaSpan::build(&ring, g, r + 3, a, &mut rng)?;
        let n = ring.degree() * r;
        let mut still = Vec::new();
        for &t in &pending {
            let tv = reduce(targets[t].embed_into(&ring)?.coordinates(), pp.m);
            match solve_span(&span.gens, &tv, n, pp) {
                Some(c) => {
                    let u = span.assemble(&c);
                    let back = reduce(gamma_full(&u)?.coordinates(), pp.m);
                    if back != tv {
                        rep.fail(format!("target {t}: rebuilt preimage has Γ ≠ t mod p^{a}"));
                    }
                    *resolved.entry(ring.degree()).or_default() += 1;
                }
                None => still.push(t),
            }
        }
        pending = still;
        if pending.is_empty() || k == kmax {
            break;
        }
        ring = ring.artin_schreier_child()?;
        k += 1;
    }
    for (d, c) in &resolved {
        rep.note(format!("{c} targets hit over residue degree {d}"));
    }
    for t in &pending {
        rep.fail(format!("target {t} not in the Γ image up to residue degree {}", ring.degree()));
    }
    // kernel: relations among Γ images over O_R give units with Γ ≡ 0; the extra digits
    // let the Det comparison see through the ramification of the value ring
    let exp_log = crate::coeff::arith::floor_log(g.exponent() as u64, p);
    let kp = sc.precision + exp_log;
    let ka = assertion_precision(p, kp);
    let kpp = PrimePower::new(p, ka);
    let kring = base.with_precision(kp)?;
    let kspan = GammaSpan::build(&kring, g, r + 8, ka, &mut rng)?;
    let n = kring.degree() * r;
    let rows: Vec<Vec<u64>> = (0..n).map(|i| kspan.gens.iter().map(|v| v[i]).collect()).collect();
    let (kernel, _) = kernel_mod(&rows, kspan.gens.len(), kpp);
    let table = character_table(g)?;
    let vr = value_ring(&kring, &table)?;
    let transversal = abelian_transversal(g);
    let tdets = transversal
        .iter()
        .map(|&x| det_hom(&GroupRingElement::group_element(&kring, g, x), &table, &vr))
        .collect::<Result<Vec<_>, _>>()?;
    let need = ka.saturating_sub(exp_log).max(1);
    let mut certified = 0;
    let mut worst = u32::MAX;
    for (k, c) in kernel.iter().take(sc.samples.clamp(1, 6)).enumerate() {
        let u = kspan.assemble(c);
        let gu = gamma_full(&u)?;
        if !gu.eq_mod(&ClassFunction::zero(&kring, g), ka) {
            rep.fail(format!("kernel sample {k}: Γ(u) ≢ 0 mod p^{ka}"));
            continue;
        }
        let b = torsion_agreement(&u, &tdets, &vr, &table)?;
        worst = worst.min(b);
        if b >= need {
            certified += 1;
        } else {
            rep.fail(format!("kernel sample {k}: Det(u) is within p^{b} of torsion, need p^{need}"));
        }
    }
    rep.note(format!(
        "{certified} kernel samples (Γ ≡ 0 mod p^{ka} at precision {kp}) certified torsion mod p^{need}, worst p^{}",
        if worst == u32::MAX { 0 } else { worst }
    ));
    // Γ vanishes on μ × G
    let mut trng = ChaCha8Rng::seed_from_u64(sc.seed ^ 0x7e1c);
    for _ in 0..4 {
        let t = random_unit_with(&ring, g, UnitKind::TeichmullerTimesGroup, &mut trng)?;
        if !gamma_full(&t)?.is_zero() {
            rep.fail(format!("Γ of the torsion unit {t:?} is not 0"));
        }
    }
    Ok(())
}

fn sample_kinds(g: &Group, p: u64) -> Vec<UnitKind> {
    let mut kinds = vec![UnitKind::General, UnitKind::TeichmullerTimesGroup, UnitKind::OnePlusPR];
    if g.is_p_group(p) {
        kinds.push(UnitKind::OnePlusI);
    }
    kinds
}

fn sampled_units(ring: &CoeffRing, g: &Arc<Group>, sc: &Scenario) -> Result<Vec<GroupRingElement>, LogDetError> {
    let kinds = sample_kinds(g, sc.p);
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    (0..sc.samples).map(|k| Ok(random_unit_with(ring, g, kinds[k % kinds.len()], &mut rng)?)).collect()
}

/// `trf ∘ i_*` is the n-th power: `Det(trf(i_*u)) = Det(u)^n`, and on p-groups the Γ side
/// `Γ_Hom(Det(trf(i_*u))) = n·Tr(Γ(u))`.
pub fn check_trf_istar(g: &Arc<Group>, sc: &Scenario) -> VerificationReport {
    let claim = "trf-istar";
    if !sc.n_s.is_multiple_of(sc.n_r) {
        return VerificationReport::skipped(claim, sc.clone(), "n_R does not divide n_S");
    }
    let mut rep = VerificationReport::new(claim, sc.clone());
    rep.precision_used = Some(sc.precision);
    if let Err(e) = trf_inner(g, sc, &mut rep) {
        rep.error(e);
    }
    rep
}

fn trf_inner(g: &Arc<Group>, sc: &Scenario, rep: &mut VerificationReport) -> Result<(), LogDetError> {
    let n = sc.relative_degree();
    let big_n = sc.precision;
    let r = CoeffRing::unramified(sc.p, sc.n_r, big_n)?;
    let s = CoeffRing::unramified(sc.p, sc.n_s, big_n)?;
    let table = character_table(g)?;
    let vr = value_ring(&r, &table)?;
    let gamma_side = g.is_p_group(sc.p) && sc.p != 2;
    let a = assertion_precision(sc.p, big_n);
    let loss = gamma_hom_loss(&vr, &table);
    let rw = r.with_precision(big_n + loss)?;
    let vrw = value_ring(&rw, &table)?;
    let units = sampled_units(&r, g, sc)?;
    for (k, u) in units.iter().enumerate() {
        let m = transfer_matrix(&i_star(u, &s)?, &r)?;
        let lhs = det_hom_matrix(&m, &table, &vr)?;
        let du = det_hom(u, &table, &vr)?;
        let rhs = HomElement { kind: du.kind, values: du.values.iter().map(|x| x.pow(n as u128)).collect() };
        if lhs != rhs {
            rep.fail(format!("unit {k}: Det(trf(i_*u)) and Det(u)^{n} agree only mod p^{}", lhs.agreement(&rhs)));
        }
        if gamma_side && a > 0 {
            let uw = u.with_precision(big_n + loss)?;
            let sw = s.with_precision(big_n + loss)?;
            let mw = transfer_matrix(&i_star(&uw, &sw)?, &rw)?;
            let hom = gamma_hom(&det_hom_matrix(&mw, &table, &vrw)?, g, &table, &vrw)?.truncate(big_n)?;
            let tr = tr_class_function(&gamma_full(u)?.scale_int(n as i64), &table, &vr)?;
            if !hom.eq_mod(&tr, a) {
                rep.fail(format!("unit {k}: Γ_Hom(Det(trf(i_*u))) ≠ n·Tr(Γ(u)) mod p^{a}"));
            }
        }
    }
    rep.note(format!("{} units, n = {n}", units.len()));
    if gamma_side && a > 0 {
        rep.note(format!("Γ side asserted mod p^{a}"));
    }
    Ok(())
}

/// `Tr ∘ Γ = Γ_Hom ∘ Det` on sampled units over `O_R`.
pub fn check_commutation(g: &Arc<Group>, sc: &Scenario) -> VerificationReport {
    let claim = "commutation";
    if sc.p == 2 {
        return VerificationReport::skipped(claim, sc.clone(), "the integral logarithm sequence is only asserted for odd p");
    }
    if !g.is_p_group(sc.p) {
        return VerificationReport::skipped(claim, sc.clone(), format!("{} is not a {}-group", g.name(), sc.p));
    }
    let units = CoeffRing::unramified(sc.p, sc.n_r, sc.precision)
        .map_err(LogDetError::from)
        .and_then(|r| sampled_units(&r, g, sc));
    match units {
        Ok(u) => commutation_check(&u, sc.clone()),
        Err(e) => {
            let mut rep = VerificationReport::new(claim, sc.clone());
            rep.error(e);
            rep
        }
    }
}
