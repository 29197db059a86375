use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Scenario, VerificationReport};
use crate::budget::Budget;
use crate::coeff::arith::factor;
use crate::coeff::CoeffRing;
use crate::groupring::GroupRingElement;
use crate::groups::{AbelianInvariants, Group};
use crate::linalg::{smith_mod, PrimePower};
use crate::logdet::{assertion_precision, gamma_full, LogDetError};

/// `κ[G]` with elements encoded as base-p integers of their coordinates.
pub struct ResidueGroupRing {
    pub ring: CoeffRing,
    pub group: Arc<Group>,
    len: usize,
    p: u64,
}

impl ResidueGroupRing {
    pub fn new(p: u64, n: usize, group: &Arc<Group>) -> Result<Self, LogDetError> {
        let ring = CoeffRing::unramified(p, n, 1)?;
        let len = group.order() * ring.degree();
        Ok(ResidueGroupRing { ring, group: group.clone(), len, p })
    }

    /// `|κ[G]|`, if it fits in a u64.
    pub fn size(&self) -> Option<u64> {
        self.p.checked_pow(self.len as u32)
    }

    pub fn decode(&self, mut k: u64) -> GroupRingElement {
        let c = (0..self.len)
            .map(|_| {
                let x = k % self.p;
                k /= self.p;
                x
            })
            .collect();
        GroupRingElement::from_flat(&self.ring, &self.group, c)
    }

    pub fn encode(&self, x: &GroupRingElement) -> u64 {
        x.flat().iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.encode(&self.decode(a).mul(&self.decode(b)))
    }

    pub fn one(&self) -> u64 {
        self.encode(&GroupRingElement::one(&self.ring, &self.group))
    }
}

/// Finite group given by a generating set inside a multiplication oracle.
fn closure(mul: &dyn Fn(u64, u64) -> u64, one: u64, gens: &[u64]) -> HashSet<u64> {
    let mut set: HashSet<u64> = HashSet::from([one]);
    let mut kept: Vec<u64> = Vec::new();
    for &g in gens {
        if set.contains(&g) {
            continue;
        }
        kept.push(g);
        let mut frontier: Vec<u64> = set.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &y in &kept {
                let z = mul(x, y);
                if set.insert(z) {
                    frontier.push(z);
                }
            }
        }
    }
    set
}

/// `K_1(κ[G])` as `κ[G]^×` modulo the subgroup generated by `(1+ab)(1+ba)^{-1}`.
#[derive(Clone, Debug)]
pub struct BruteK1 {
    pub units: usize,
    pub relation_subgroup: usize,
    pub invariants: AbelianInvariants,
    /// false when the pairs `(a, b)` were sampled
    pub exhaustive: bool,
    pub abelian: bool,
}

pub fn brute_force_k1(kg: &ResidueGroupRing, seed: u64) -> Result<BruteK1, LogDetError> {
    let size = kg.size().filter(|&s| s <= Budget::global().kappa_ring).ok_or_else(|| {
        LogDetError::BudgetExceeded(format!("|κ[G]| = {}^{} exceeds kappa_ring", kg.p, kg.len))
    })?;
    let all: Vec<GroupRingElement> = (0..size).map(|k| kg.decode(k)).collect();
    let units: Vec<u64> = (0..size).filter(|&k| all[k as usize].is_unit()).collect();
    let inverse: HashMap<u64, u64> = units
        .iter()
        .map(|&k| Ok((k, kg.encode(&all[k as usize].invert()?))))
        .collect::<Result<_, LogDetError>>()?;
    let one = kg.one();
    let mut rels = Vec::new();
    let exhaustive = size * size <= 1 << 20;
    let mut rel = |a: usize, b: usize| {
        let ab = kg.mul(a as u64, b as u64);
        let x = all[ab as usize].add(&all[one as usize]);
        if !x.is_unit() {
            return;
        }
        let ba = kg.mul(b as u64, a as u64);
        let y = all[ba as usize].add(&all[one as usize]);
        let r = kg.mul(kg.encode(&x), inverse[&kg.encode(&y)]);
        if r != one {
            rels.push(r);
        }
    };
    if exhaustive {
        for a in 0..size as usize {
            for b in 0..size as usize {
                rel(a, b);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4096 {
            rel(rng.gen_range(0..size as usize), rng.gen_range(0..size as usize));
        }
    }
    rels.sort_unstable();
    rels.dedup();
    let mul = |a: u64, b: u64| kg.mul(a, b);
    let h = closure(&mul, one, &rels);
    // cosets xH and the order of each coset
    let mut seen: HashSet<u64> = HashSet::new();
    let mut reps = Vec::new();
    for &x in &units {
        if seen.contains(&x) {
            continue;
        }
        reps.push(x);
        for &y in &h {
            seen.insert(kg.mul(x, y));
        }
    }
    let orders: Vec<u64> = reps
        .iter()
        .map(|&x| {
            let mut y = x;
            let mut k = 1;
            while !h.contains(&y) {
                y = kg.mul(y, x);
                k += 1;
            }
            k
        })
        .collect();
    let abelian = reps.iter().take(32).all(|&x| {
        reps.iter().take(32).all(|&y| {
            let c = kg.mul(kg.mul(x, y), kg.mul(inverse[&x], inverse[&y]));
            h.contains(&c)
        })
    });
    // |Q[ℓ^j]| layer by layer
    let q = reps.len() as u64;
    let mut parts = Vec::new();
    for (l, _) in factor(q) {
        let mut prev = 0u32;
        let mut j = 1;
        loop {
            let lj = l.pow(j);
            let count = orders.iter().filter(|&&o| lj % o == 0).count() as u64;
            let s = crate::coeff::arith::floor_log(count, l);
            if s == prev {
                break;
            }
            // s − prev cyclic factors of order ≥ ℓ^j
            parts.push((l, j, s - prev));
            prev = s;
            j += 1;
        }
    }
    let mut primary = Vec::new();
    for &(l, j, c) in &parts {
        let next = parts.iter().find(|&&(l2, j2, _)| l2 == l && j2 == j + 1).map_or(0, |x| x.2);
        for _ in 0..(c - next) {
            primary.push((l, j));
        }
    }
    Ok(BruteK1 {
        units: units.len(),
        relation_subgroup: h.len(),
        invariants: AbelianInvariants::from_primary(&primary),
        exhaustive,
        abelian,
    })
}

/// `|E_2(κ[G])|` against `|SL_2(κ[G])|` for commutative `κ[G]`, by enumeration.
pub fn gl2_elementary_crosscheck(kg: &ResidueGroupRing) -> Result<(usize, usize, usize), LogDetError> {
    let size = kg.size().filter(|&s| s.pow(4) <= Budget::global().kappa_ring).ok_or_else(|| {
        LogDetError::BudgetExceeded("GL_2 enumeration".into())
    })? as usize;
    let table: Vec<Vec<u64>> = (0..size as u64).map(|a| (0..size as u64).map(|b| kg.mul(a, b)).collect()).collect();
    let all: Vec<GroupRingElement> = (0..size as u64).map(|k| kg.decode(k)).collect();
    let add: Vec<Vec<u64>> = (0..size).map(|a| (0..size).map(|b| kg.encode(&all[a].add(&all[b]))).collect()).collect();
    let sub: Vec<Vec<u64>> = (0..size).map(|a| (0..size).map(|b| kg.encode(&all[a].sub(&all[b]))).collect()).collect();
    let units: HashSet<u64> = (0..size as u64).filter(|&k| all[k as usize].is_unit()).collect();
    let (zero, one) = (0u64, kg.one());
    let s = size as u64;
    let enc = |m: [u64; 4]| ((m[0] * s + m[1]) * s + m[2]) * s + m[3];
    let dec = |k: u64| [k / (s * s * s), (k / (s * s)) % s, (k / s) % s, k % s];
    let det = |m: [u64; 4]| sub[table[m[0] as usize][m[3] as usize] as usize][table[m[1] as usize][m[2] as usize] as usize];
    let mul = |x: u64, y: u64| {
        let (a, b) = (dec(x), dec(y));
        let e = |i: usize, j: usize, k: usize, l: usize| {
            add[table[a[i] as usize][b[j] as usize] as usize][table[a[k] as usize][b[l] as usize] as usize]
        };
        enc([e(0, 0, 1, 2), e(0, 1, 1, 3), e(2, 0, 3, 2), e(2, 1, 3, 3)])
    };
    let mut gl = 0;
    let mut sl = 0;
    for k in 0..s.pow(4) {
        let d = det(dec(k));
        if units.contains(&d) {
            gl += 1;
            if d == one {
                sl += 1;
            }
        }
    }
    let gens: Vec<u64> = (1..s).flat_map(|a| [enc([one, a, zero, one]), enc([one, zero, a, one])]).collect();
    let e2 = closure(&mul, enc([one, zero, zero, one]), &gens).len();
    Ok((gl, sl, e2))
}

/// Residue sequence: brute-force `K_1(κ[G])`, surjectivity of reduction from level 3 lifts, and
/// the rank of `Γ` on the kernel of reduction.
pub fn residue_sequence_check(g: &Arc<Group>, sc: &Scenario) -> VerificationReport {
    let mut rep = VerificationReport::new("residue-seq", sc.clone());
    rep.finite_level = true;
    if let Err(e) = residue_inner(g, sc, &mut rep) {
        rep.error(e);
    }
    rep
}

fn residue_inner(g: &Arc<Group>, sc: &Scenario, rep: &mut VerificationReport) -> Result<(), LogDetError> {
    let p = sc.p;
    let kg = ResidueGroupRing::new(p, sc.n_r, g)?;
    let lift_ring = CoeffRing::unramified(p, sc.n_r, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let commutative = g.is_abelian();
    // (a) brute force, (b) surjectivity from lifts
    let sample_units: Vec<GroupRingElement> = match brute_force_k1(&kg, sc.seed) {
        Ok(k1) => {
            rep.note(format!(
                "K1(κ[G]) = {} from {} units modulo a relation subgroup of order {}{}",
                k1.invariants,
                k1.units,
                k1.relation_subgroup,
                if k1.exhaustive { "" } else { " (sampled pairs)" }
            ));
            if !k1.abelian {
                rep.fail("units modulo the relation subgroup are not abelian");
            }
            if commutative && (k1.relation_subgroup != 1 || k1.invariants.order() != k1.units as u64) {
                rep.fail(format!("commutative κ[G] but K1 has order {} ≠ |κ[G]^×| = {}", k1.invariants.order(), k1.units));
            }
            if commutative {
                if let Ok((gl, sl, e2)) = gl2_elementary_crosscheck(&kg) {
                    rep.note(format!("GL_2: |GL_2| = {gl}, |SL_2| = {sl}, |E_2| = {e2}"));
                    if sl != e2 || gl != sl * k1.units {
                        rep.fail(format!("GL_2 crosscheck: |SL_2| = {sl} but |E_2| = {e2}"));
                    }
                }
            }
            let size = kg.size().unwrap();
            (0..size).map(|k| kg.decode(k)).filter(|x| x.is_unit()).collect()
        }
        Err(LogDetError::BudgetExceeded(msg)) => {
            rep.note(format!("brute force skipped ({msg}); surjectivity sampled"));
            let mut out = Vec::new();
            while out.len() < sc.samples.max(1) * 4 {
                let x = crate::groupring::random_element_with(&kg.ring, g, &mut rng);
                if x.is_unit() {
                    out.push(x);
                }
            }
            out
        }
        Err(e) => return Err(e),
    };
    let m3 = lift_ring.modulus_value();
    for (k, x) in sample_units.iter().enumerate() {
        let offset = crate::groupring::random_element_with(&lift_ring, g, &mut rng).scale_int(p as i64);
        let lift = x.with_precision(3)?.add(&offset);
        if !lift.is_unit() || lift.with_precision(1)? != *x {
            rep.fail(format!("unit {k}: a level 3 lift is not a unit reducing to it"));
        }
        debug_assert!(lift.flat().iter().all(|&c| c < m3));
    }
    rep.note(format!("{} residue units lifted to level 3", sample_units.len()));
    // (c) Γ on 1 + pO[G] spans a free module of rank d·#classes
    if !g.is_p_group(p) || p == 2 {
        rep.note("kernel rank skipped: Γ needs a p-group and odd p");
        return Ok(());
    }
    let exp_log = crate::coeff::arith::floor_log(g.exponent() as u64, p);
    let depth = exp_log + 2;
    let mut prec = sc.precision.max(2);
    while assertion_precision(p, prec) < depth {
        prec += 1;
    }
    let ring = CoeffRing::unramified(p, sc.n_r, prec)?;
    let d = ring.degree();
    let one = GroupRingElement::one(&ring, g);
    let pm = p.pow(depth);
    let mut rows = Vec::new();
    for x in 0..g.order() {
        for b in 0..d {
            let mut c = vec![0u64; d];
            c[b] = p;
            let lam = ring.element(&c)?;
            let u = one.add(&GroupRingElement::group_element(&ring, g, x).scale(&lam));
            rows.push(gamma_full(&u)?.coordinates().iter().map(|&v| v % pm).collect::<Vec<u64>>());
        }
    }
    for _ in 0..sc.samples {
        let x = crate::groupring::random_element_with(&ring, g, &mut rng).scale_int(p as i64);
        rows.push(gamma_full(&one.add(&x))?.coordinates().iter().map(|&v| v % pm).collect());
    }
    let ncols = d * g.num_classes();
    let (vals, _) = smith_mod(&mut rows, ncols, PrimePower::new(p, depth), false);
    rep.note(format!(
        "Γ(1 + pO[G]) mod p^{depth}: rank {} with elementary divisors p^{:?}",
        vals.len(),
        vals
    ));
    if vals.len() != ncols {
        rep.fail(format!("kernel rank {} ≠ {} = [O:Z_p]·#classes", vals.len(), ncols));
    }
    rep.precision_used = Some(prec);
    Ok(())
}
