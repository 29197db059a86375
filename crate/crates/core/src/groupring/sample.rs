use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GroupRingElement, GroupRingError};
use crate::coeff::{CoeffRing, RingElement};
use crate::groups::{Group, GroupError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitKind {
    /// `1 + I(O[G])`, coefficients on `g − 1`.
    OnePlusI,
    /// `1 + 𝒜(O[G])`, built from `g(k − 1)` with `k` in the derived subgroup.
    OnePlusA,
    /// `1 + p·O[G]`.
    OnePlusPR,
    /// `ω·g` with `ω` a Teichmüller unit.
    TeichmullerTimesGroup,
    /// Any unit, by rejection sampling.
    General,
}

impl UnitKind {
    pub const ALL: [UnitKind; 5] =
        [UnitKind::OnePlusI, UnitKind::OnePlusA, UnitKind::OnePlusPR, UnitKind::TeichmullerTimesGroup, UnitKind::General];
}

pub(crate) fn random_coeff(ring: &CoeffRing, rng: &mut impl Rng) -> RingElement {
    let m = ring.modulus_value();
    let c: Vec<u64> = (0..ring.degree()).map(|_| rng.gen_range(0..m)).collect();
    ring.element(&c).unwrap()
}

pub(crate) fn random_element_with(ring: &CoeffRing, group: &Arc<Group>, rng: &mut impl Rng) -> GroupRingElement {
    let m = ring.modulus_value();
    let coeffs = (0..group.order() * ring.degree()).map(|_| rng.gen_range(0..m)).collect();
    GroupRingElement::from_flat(ring, group, coeffs)
}

/// Uniform element of `O[G]`.
pub fn sample_element(ring: &CoeffRing, group: &Arc<Group>, seed: u64) -> GroupRingElement {
    random_element_with(ring, group, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub(crate) fn random_teichmuller(ring: &CoeffRing, rng: &mut impl Rng) -> Result<RingElement, GroupRingError> {
    let field = ring.residue_field()?;
    let p = field.p();
    loop {
        let c: Vec<u64> = (0..field.degree()).map(|_| rng.gen_range(0..p)).collect();
        let a = field.element(&c)?;
        if !a.is_zero() {
            return Ok(ring.teichmuller(&a)?);
        }
    }
}

pub(crate) fn random_unit_with(
    ring: &CoeffRing,
    group: &Arc<Group>,
    kind: UnitKind,
    rng: &mut impl Rng,
) -> Result<GroupRingElement, GroupRingError> {
    let p = ring.p();
    let p_group = group.is_p_group(p);
    if matches!(kind, UnitKind::OnePlusI | UnitKind::OnePlusA) && !p_group {
        return Err(GroupError::NotAPGroup(group.name().to_string()).into());
    }
    let one = GroupRingElement::one(ring, group);
    match kind {
        UnitKind::OnePlusI => {
            let mut x = GroupRingElement::zero(ring, group);
            for g in 1..group.order() {
                let gm1 = GroupRingElement::group_element(ring, group, g).sub(&one);
                x = x.add(&gm1.scale(&random_coeff(ring, rng)));
            }
            Ok(one.add(&x))
        }
        UnitKind::OnePlusA => {
            let derived = group.derived_subgroup();
            let mut x = GroupRingElement::zero(ring, group);
            for &k in derived.iter().filter(|&&k| k != 0) {
                let km1 = GroupRingElement::group_element(ring, group, k).sub(&one);
                let a = random_element_with(ring, group, rng);
                x = x.add(&a.mul(&km1));
            }
            Ok(one.add(&x))
        }
        UnitKind::OnePlusPR => Ok(one.add(&random_element_with(ring, group, rng).scale_int(p as i64))),
        UnitKind::TeichmullerTimesGroup => {
            let w = random_teichmuller(ring, rng)?;
            let g = rng.gen_range(0..group.order());
            Ok(GroupRingElement::group_element(ring, group, g).scale(&w))
        }
        UnitKind::General => {
            for _ in 0..1000 {
                let x = random_element_with(ring, group, rng);
                if x.is_unit() {
                    return Ok(x);
                }
            }
            Err(GroupRingError::Domain("no unit found in 1000 draws".into()))
        }
    }
}

/// Deterministic unit of the requested shape.
pub fn sample_unit(
    ring: &CoeffRing,
    group: &Arc<Group>,
    kind: UnitKind,
    seed: u64,
) -> Result<GroupRingElement, GroupRingError> {
    random_unit_with(ring, group, kind, &mut ChaCha8Rng::seed_from_u64(seed))
}
