use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::coeff::CoeffRing;
use crate::groups::{group_by_name, Group};

fn grp(name: &str) -> Arc<Group> {
    Arc::new(group_by_name(name).unwrap())
}

fn zp(p: u64, n: u32) -> CoeffRing {
    CoeffRing::integers(p, n).unwrap()
}

#[test]
fn augmentation_examples() {
    let r = zp(3, 4);
    let g = grp("C9");
    assert_eq!(GroupRingElement::one(&r, &g).aug(), r.one());
    let all = (0..9).fold(GroupRingElement::zero(&r, &g), |a, h| a.add(&GroupRingElement::group_element(&r, &g, h)));
    assert_eq!(all.aug(), r.from_int(9));
    for s in 0..10 {
        let x = sample_element(&r, &g, s);
        let y = sample_element(&r, &g, s + 100);
        assert_eq!(x.mul(&y).aug(), x.aug().mul(&y.aug()));
    }
}

#[test]
fn one_plus_g_times_one_minus_g() {
    let r = zp(2, 5);
    let g = grp("C4");
    let one = GroupRingElement::one(&r, &g);
    let x = GroupRingElement::group_element(&r, &g, g.generators()[0]);
    let lhs = one.add(&x).mul(&one.sub(&x));
    assert_eq!(lhs, one.sub(&x.mul(&x)));
}

#[test]
fn classproj_on_q8() {
    let r = zp(2, 3);
    let g = grp("Q8");
    let gens = g.generators();
    let (i, j) = (gens[0], gens[1]);
    assert_ne!(g.class_of(i), g.class_of(j));
    let x = GroupRingElement::group_element(&r, &g, i).add(&GroupRingElement::group_element(&r, &g, j));
    let c = x.classproj();
    for k in 0..g.num_classes() {
        let expect = if k == g.class_of(i) || k == g.class_of(j) { r.one() } else { r.zero() };
        assert_eq!(c.get(k), expect);
    }
}

#[test]
fn classproj_is_conjugation_invariant() {
    let r = zp(3, 3);
    let g = grp("Heis3");
    for s in 0..50u64 {
        let a = (s as usize * 7) % 27;
        let b = (s as usize * 11 + 3) % 27;
        let ab = GroupRingElement::group_element(&r, &g, g.mul(a, b));
        let ba = GroupRingElement::group_element(&r, &g, g.mul(b, a));
        assert_eq!(ab.classproj(), ba.classproj());
    }
    for s in 0..5 {
        let u = sample_unit(&r, &g, UnitKind::General, s).unwrap();
        let x = sample_element(&r, &g, s + 50);
        let conj = u.mul(&x).mul(&u.invert().unwrap());
        assert_eq!(conj.classproj(), x.classproj());
    }
}

#[test]
fn psi_and_phi_commute_with_classproj() {
    let r = zp(3, 4);
    let g = grp("Heis3");
    assert_eq!(GroupRingElement::one(&r, &g).psi(), GroupRingElement::one(&r, &g));
    for s in 0..50 {
        let x = sample_element(&r, &g, s);
        assert_eq!(x.psi().classproj(), x.classproj().phi());
    }
    let o = CoeffRing::unramified(3, 2, 3).unwrap();
    for s in 0..10 {
        let x = sample_element(&o, &g, s);
        assert_eq!(x.psi().classproj(), x.classproj().phi());
    }
}

#[test]
fn psi_on_c4() {
    let o = CoeffRing::unramified(2, 2, 4).unwrap();
    let g = grp("C4");
    let gen = g.generators()[0];
    let rr = o.generator();
    let x = GroupRingElement::group_element(&o, &g, gen).scale(&rr);
    let expect = GroupRingElement::group_element(&o, &g, g.mul(gen, gen)).scale(&rr.frobenius());
    assert_eq!(x.psi(), expect);
}

#[test]
fn inverses() {
    let r = zp(3, 4);
    let g = grp("C3xC3");
    let h = 5;
    let x = GroupRingElement::group_element(&r, &g, h);
    assert_eq!(x.invert().unwrap(), GroupRingElement::group_element(&r, &g, g.inv(h)));
    for kind in UnitKind::ALL {
        for s in 0..5 {
            let u = sample_unit(&r, &g, kind, s).unwrap();
            let v = u.invert().unwrap();
            assert_eq!(u.mul(&v), GroupRingElement::one(&r, &g));
        }
    }
    let s3 = grp("S3");
    for s in 0..5 {
        let u = sample_unit(&r, &s3, UnitKind::General, s).unwrap();
        assert_eq!(u.mul(&u.invert().unwrap()), GroupRingElement::one(&r, &s3));
    }
}

#[test]
fn one_minus_g_is_not_a_unit() {
    let r = zp(3, 3);
    let g = grp("C3");
    let x = GroupRingElement::one(&r, &g).sub(&GroupRingElement::group_element(&r, &g, 1));
    assert!(!x.is_unit());
    assert!(!x.is_unit_by_matrix());
    assert!(matches!(x.invert(), Err(GroupRingError::NotAUnit)));
}

fn exhaustive_units(p: u64, name: &str) {
    let r = zp(p, 1);
    let g = grp(name);
    let n = g.order();
    let total = (p as usize).pow(n as u32);
    let elems: Vec<GroupRingElement> = (0..total)
        .map(|mut k| {
            let c: Vec<u64> = (0..n)
                .map(|_| {
                    let d = (k % p as usize) as u64;
                    k /= p as usize;
                    d
                })
                .collect();
            GroupRingElement::from_flat(&r, &g, c)
        })
        .collect();
    let one = GroupRingElement::one(&r, &g);
    for x in &elems {
        let brute = elems.iter().any(|y| x.mul(y) == one);
        assert_eq!(x.is_unit(), brute, "{name} {x:?}");
        assert_eq!(x.is_unit_by_matrix(), brute);
    }
}

#[test]
fn unit_test_agrees_with_enumeration() {
    exhaustive_units(2, "C2");
    exhaustive_units(3, "C3");
    exhaustive_units(2, "C2xC2");
    exhaustive_units(2, "S3");
}

#[test]
fn sampled_shapes() {
    let r = zp(3, 4);
    let g = grp("Heis3");
    let (_, q, proj) = g.abelianization();
    let q = Arc::new(q);
    for s in 0..5 {
        let u = sample_unit(&r, &g, UnitKind::OnePlusA, s).unwrap();
        assert_eq!(u.push_forward(&q, &proj), GroupRingElement::one(&r, &q));
        assert!(u.sub(&GroupRingElement::one(&r, &g)).in_a_ideal());
        let v = sample_unit(&r, &g, UnitKind::OnePlusPR, s).unwrap();
        assert!(v.eq_mod(&GroupRingElement::one(&r, &g), 1));
        let w = sample_unit(&r, &g, UnitKind::OnePlusI, s).unwrap();
        assert_eq!(w.aug(), r.one());
    }
    assert_eq!(sample_unit(&r, &g, UnitKind::General, 9).unwrap(), sample_unit(&r, &g, UnitKind::General, 9).unwrap());
    assert!(sample_unit(&r, &grp("S3"), UnitKind::OnePlusI, 0).is_err());
}

#[test]
fn a_ideal_membership_examples() {
    let r = zp(3, 3);
    let g = grp("Heis3");
    assert!(GroupRingElement::zero(&r, &g).in_a_ideal());
    let (a, b) = (g.generators()[0], g.generators()[1]);
    let one = GroupRingElement::one(&r, &g);
    let c = GroupRingElement::group_element(&r, &g, g.commutator(a, b)).sub(&one);
    assert!(c.in_a_ideal());
    let x = GroupRingElement::group_element(&r, &g, a).sub(&one);
    assert!(!x.in_a_ideal());
}

#[test]
fn i_star_is_a_homomorphism() {
    let r = zp(3, 3);
    let s = CoeffRing::unramified(3, 2, 3).unwrap();
    let g = grp("Heis3");
    for k in 0..5 {
        let x = sample_element(&r, &g, k);
        let y = sample_element(&r, &g, k + 10);
        let ix = i_star(&x, &s).unwrap();
        let iy = i_star(&y, &s).unwrap();
        assert_eq!(i_star(&x.mul(&y), &s).unwrap(), ix.mul(&iy));
        assert_eq!(i_star(&x.add(&y), &s).unwrap(), ix.add(&iy));
        assert_eq!(ix.aug(), s.embed(&x.aug()).unwrap());
        assert_eq!(ix.classproj(), x.classproj().embed_into(&s).unwrap());
    }
}

#[test]
fn transfer_of_base_scalar_is_diagonal() {
    let r = zp(3, 3);
    let s = CoeffRing::unramified(3, 2, 3).unwrap();
    let g = grp("C1");
    let u = r.from_int(7);
    let m = transfer_matrix(&GroupRingElement::scalar(&g, &s.embed(&u).unwrap()), &r).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let expect = if i == j { u.clone() } else { r.zero() };
            assert_eq!(m.entries[i][j].coefficient(0), expect);
        }
    }
    assert_eq!(m.determinant_commutative().unwrap().coefficient(0), u.pow(2));
}

#[test]
fn transfer_determinant_of_teichmuller_is_its_norm() {
    let r = zp(3, 3);
    let s = CoeffRing::unramified(3, 2, 3).unwrap();
    let g = grp("C1");
    let f9 = s.residue_field().unwrap();
    let w = s.teichmuller(&f9.generator()).unwrap();
    let norm = w.mul(&w.frobenius());
    let m = transfer_matrix(&GroupRingElement::scalar(&g, &w), &r).unwrap();
    let det = m.determinant_commutative().unwrap().coefficient(0);
    assert_eq!(s.embed(&det).unwrap(), norm);
    // a Teichmüller element of Z/27 is ±1
    assert!(det == r.one() || det == r.from_int(-1));
    // the norm does not depend on the basis
    let other = vec![s.one().add(&s.generator()), s.generator().scale(2)];
    let m2 = transfer_matrix_with_basis(&GroupRingElement::scalar(&g, &w), &r, &other).unwrap();
    assert_eq!(m2.determinant_commutative().unwrap().coefficient(0), det);
}

#[test]
fn transfer_matrix_is_multiplicative() {
    let r = zp(3, 3);
    let s = CoeffRing::unramified(3, 2, 3).unwrap();
    let g = grp("C3xC3");
    for k in 0..5 {
        let u = sample_unit(&s, &g, UnitKind::General, k).unwrap();
        let v = sample_unit(&s, &g, UnitKind::General, k + 7).unwrap();
        let mu = transfer_matrix(&u, &r).unwrap();
        let mv = transfer_matrix(&v, &r).unwrap();
        assert_eq!(transfer_matrix(&u.mul(&v), &r).unwrap(), mu.mul(&mv));
    }
}

#[test]
fn default_basis_over_tower() {
    let r = CoeffRing::unramified(3, 2, 2).unwrap();
    let s = CoeffRing::unramified(3, 4, 2).unwrap();
    assert_eq!(default_basis(&r, &s).unwrap().len(), 2);
    let z = zp(3, 2);
    assert_eq!(default_basis(&z, &s).unwrap().len(), 4);
    assert!(default_basis(&s, &r).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_aug_is_multiplicative(seed in any::<u64>()) {
        let r = zp(2, 4);
        let g = grp("D4");
        let x = sample_element(&r, &g, seed);
        let y = sample_element(&r, &g, seed ^ 0x5555);
        prop_assert_eq!(x.mul(&y).aug(), x.aug().mul(&y.aug()));
    }

    #[test]
    fn prop_classproj_psi(seed in any::<u64>()) {
        let r = zp(2, 4);
        let g = grp("Q8");
        let x = sample_element(&r, &g, seed);
        prop_assert_eq!(x.psi().classproj(), x.classproj().phi());
    }

    #[test]
    fn prop_inverse(seed in any::<u64>()) {
        let r = zp(3, 5);
        let g = grp("C9");
        let u = sample_unit(&r, &g, UnitKind::General, seed).unwrap();
        prop_assert_eq!(u.mul(&u.invert().unwrap()), GroupRingElement::one(&r, &g));
    }
}

