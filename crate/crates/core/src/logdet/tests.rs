use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::coeff::{scalar_log, CoeffRing};
use crate::descent::Scenario;
use crate::groupring::{sample_element, sample_unit, ClassFunction, GroupRingElement, UnitKind};
use crate::groups::{catalog_names, group_by_name, Group};

fn grp(name: &str) -> Arc<Group> {
    Arc::new(group_by_name(name).unwrap())
}

fn zp(p: u64, n: u32) -> CoeffRing {
    CoeffRing::integers(p, n).unwrap()
}

#[test]
fn log_of_one_and_scalar_case() {
    let r = zp(3, 4);
    let g = grp("C3");
    assert!(gr_log(&GroupRingElement::one(&r, &g)).unwrap().is_zero());
    let c1 = grp("C1");
    let four = GroupRingElement::scalar(&c1, &r.from_int(4));
    assert_eq!(gr_log(&four).unwrap().coefficient(0), r.from_int(48));
    assert_eq!(gr_log(&four).unwrap().coefficient(0), scalar_log(&r.from_int(4)).unwrap());
}

#[test]
fn exp_inverts_log() {
    let r = zp(3, 5);
    let g = grp("C3");
    for s in 0..25 {
        let u = sample_unit(&r, &g, UnitKind::OnePlusPR, s).unwrap();
        assert_eq!(gr_exp(&gr_log(&u).unwrap()).unwrap(), u);
    }
}

#[test]
fn log_turns_products_into_sums_on_commuting_units() {
    let r = zp(3, 5);
    let g = grp("C9");
    for s in 0..10 {
        let u = sample_unit(&r, &g, UnitKind::OnePlusPR, s).unwrap();
        let v = sample_unit(&r, &g, UnitKind::OnePlusPR, s + 40).unwrap();
        assert_eq!(gr_log(&u.mul(&v)).unwrap(), gr_log(&u).unwrap().add(&gr_log(&v).unwrap()));
    }
}

#[test]
fn gamma_r_examples() {
    let r = zp(3, 3);
    assert_eq!(gamma_r(&r.from_int(4)).unwrap(), r.from_int(5));
    let o = CoeffRing::unramified(3, 2, 4).unwrap();
    let f = o.residue_field().unwrap();
    for a in f.elements().filter(|a| !a.is_zero()) {
        assert!(gamma_r(&o.teichmuller(&a).unwrap()).unwrap().is_zero());
    }
    let a = assertion_precision(3, 4);
    for s in 0..50u64 {
        let x = crate::groupring::sample_unit(&o, &grp("C1"), UnitKind::General, s).unwrap().coefficient(0);
        let y = crate::groupring::sample_unit(&o, &grp("C1"), UnitKind::General, s + 999).unwrap().coefficient(0);
        let lhs = gamma_r(&x.mul(&y)).unwrap();
        let rhs = gamma_r(&x).unwrap().add(&gamma_r(&y).unwrap());
        assert!(lhs.eq_mod(&rhs, a));
    }
}

#[test]
fn gamma_kills_torsion() {
    let r = CoeffRing::unramified(3, 2, 4).unwrap();
    let f = r.residue_field().unwrap();
    for name in ["C3", "C9", "C3xC3", "Heis3"] {
        let g = grp(name);
        for x in 0..g.order() {
            let w = r.teichmuller(&f.generator()).unwrap();
            let u = GroupRingElement::group_element(&r, &g, x).scale(&w);
            assert!(gamma_full(&u).unwrap().is_zero(), "{name} {x}");
        }
    }
}

#[test]
fn gamma_of_scalars_sits_on_the_identity_class() {
    let r = zp(3, 4);
    let g = grp("Heis3");
    for k in [2i64, 4, 7, 10, 25] {
        let x = r.from_int(k);
        let c = gamma_full(&GroupRingElement::scalar(&g, &x)).unwrap();
        assert_eq!(c.get(0), gamma_r(&x).unwrap());
        assert!((1..g.num_classes()).all(|i| c.get(i).is_zero()));
    }
}

#[test]
fn gamma_is_a_homomorphism() {
    let r = zp(3, 4);
    let a = assertion_precision(3, 4);
    for name in ["C3", "C3xC3", "Heis3"] {
        let g = grp(name);
        for s in 0..50 {
            let u = sample_unit(&r, &g, UnitKind::General, s).unwrap();
            let v = sample_unit(&r, &g, UnitKind::General, s + 500).unwrap();
            let lhs = gamma_full(&u.mul(&v)).unwrap();
            let rhs = gamma_full(&u).unwrap().add(&gamma_full(&v).unwrap());
            assert!(lhs.eq_mod(&rhs, a), "{name} seed {s}");
            // the lift-independent precision
            assert!(lhs.eq_mod(&rhs, 3), "{name} seed {s}");
        }
    }
}

#[test]
fn gamma_does_not_depend_on_the_power_used() {
    let r = zp(3, 4);
    let g = grp("C3");
    let one = GroupRingElement::one(&r, &g);
    let x = GroupRingElement::group_element(&r, &g, 1);
    let u = one.add(&x.sub(&one));
    assert!(gamma_full(&u).unwrap().is_zero());
    assert!(gamma_with_working_precision(&u, 3).unwrap().is_zero());
    for s in 0..10 {
        let u = sample_unit(&r, &g, UnitKind::OnePlusI, s).unwrap();
        let base = gamma_full(&u).unwrap();
        assert_eq!(gamma_with_working_precision(&u, 1).unwrap(), base);
        assert_eq!(gamma_with_working_precision(&u, 2).unwrap(), base);
        // the same unit read in a higher precision ring, then truncated
        let hi = gamma_full(&u.with_precision(7).unwrap()).unwrap();
        assert_eq!(hi.with_precision(4).unwrap(), base);
    }
    assert!(gamma_i(&GroupRingElement::one(&r, &g)).unwrap().is_zero());
}

fn pushforward_to_abelianization(c: &ClassFunction) -> Vec<Vec<u64>> {
    let g = c.group();
    let (_, q, proj) = g.abelianization();
    let d = c.ring().degree();
    let m = c.ring().modulus_value();
    let mut out = vec![vec![0u64; d]; q.order()];
    for k in 0..g.num_classes() {
        let t = proj[g.conjugacy().representatives[k]];
        for (o, x) in out[t].iter_mut().zip(c.get(k).coeffs()) {
            *o = (*o + x) % m;
        }
    }
    out
}

#[test]
fn gamma_maps_one_plus_a_into_classproj_of_a() {
    let r = zp(3, 4);
    let g = grp("Heis3");
    for s in 0..10 {
        let u = sample_unit(&r, &g, UnitKind::OnePlusA, s).unwrap();
        // the canonical lift of u leaves 1 + 𝒜 above p^N
        let push = pushforward_to_abelianization(&gamma_full(&u).unwrap());
        assert!(push.iter().flatten().all(|&x| x % 27 == 0));
    }
}

#[test]
fn character_table_examples() {
    let c2 = character_table(&grp("C2")).unwrap();
    assert_eq!(c2.characters.iter().map(|c| c.values.clone()).collect::<Vec<_>>(), vec![vec![vec![1], vec![1]], vec![vec![1], vec![-1]]]);

    let s3g = grp("S3");
    let s3 = character_table(&s3g).unwrap();
    assert_eq!(s3.characters.iter().map(|c| c.degree).collect::<Vec<_>>(), vec![1, 1, 2]);
    let conj = s3g.conjugacy();
    let transposition = (0..3).find(|&k| s3g.element_order(conj.representatives[k]) == 2).unwrap();
    let three_cycle = (0..3).find(|&k| s3g.element_order(conj.representatives[k]) == 3).unwrap();
    // values are polynomials in ζ_6 modulo Φ_6 = x² − x + 1
    assert_eq!(s3.characters[2].values[transposition], vec![0, 0]);
    assert_eq!(s3.characters[2].values[three_cycle], vec![-1, 0]);

    let q8g = grp("Q8");
    let q8 = character_table(&q8g).unwrap();
    assert_eq!(q8.characters.iter().map(|c| c.degree).collect::<Vec<_>>(), vec![1, 1, 1, 1, 2]);
    let minus_one = q8g.class_of(q8g.center()[1]);
    assert_eq!(q8.characters[4].values[minus_one], vec![-2, 0]);

    for name in catalog_names() {
        let g = group_by_name(name).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.len(), g.num_classes(), "{name}");
        assert_eq!(t.characters.iter().map(|c| c.degree * c.degree).sum::<u64>(), g.order() as u64);
        t.verify_orthogonality().unwrap();
    }
}

#[test]
fn adams_examples() {
    let t1 = character_table(&grp("C1")).unwrap();
    assert_eq!(t1.adams_matrix(&[0]).unwrap(), vec![vec![1]]);
    let c2 = grp("C2");
    let t2 = character_table(&c2).unwrap();
    assert_eq!(t2.adams_matrix(&c2.power_map_on_classes(3)).unwrap(), vec![vec![1, 0], vec![0, 1]]);
    let c3 = grp("C3");
    let t3 = character_table(&c3).unwrap();
    let a = t3.adams_matrix(&c3.power_map_on_classes(3)).unwrap();
    assert!(a.iter().all(|row| row == &vec![1, 0, 0]));
}

#[test]
fn trace_examples() {
    let r = zp(3, 3);
    for name in ["S3", "Heis3", "Q8"] {
        let g = grp(name);
        let t = character_table(&g).unwrap();
        let vr = value_ring(&r, &t).unwrap();
        let one = tr_hom(&GroupRingElement::one(&r, &g), &t, &vr).unwrap();
        for (i, c) in t.characters.iter().enumerate() {
            assert_eq!(one.values[i], vr.ring.from_int(c.degree as i64));
        }
        let all = (0..g.order()).fold(GroupRingElement::zero(&r, &g), |a, x| a.add(&GroupRingElement::group_element(&r, &g, x)));
        let s = tr_hom(&all, &t, &vr).unwrap();
        assert_eq!(s.values[0], vr.ring.from_int(g.order() as i64));
        assert!(s.values[1..].iter().all(|v| v.is_zero()));
        let x = sample_element(&r, &g, 1);
        let y = sample_element(&r, &g, 2);
        assert_eq!(tr_hom(&x.add(&y), &t, &vr).unwrap(), tr_hom(&x, &t, &vr).unwrap().combine(&tr_hom(&y, &t, &vr).unwrap()));
    }
}

#[test]
fn det_character_examples() {
    let r = zp(5, 3);
    let s3 = grp("S3");
    let t = character_table(&s3).unwrap();
    let vr = value_ring(&r, &t).unwrap();
    let tr = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
    assert_eq!(det_character(&s3, &t, 0, tr, &vr).unwrap(), vr.ring.one());
    assert_eq!(det_character(&s3, &t, 1, tr, &vr).unwrap(), vr.ring.from_int(-1));
    assert_eq!(det_character(&s3, &t, 2, tr, &vr).unwrap(), vr.ring.from_int(-1));

    let r = zp(3, 3);
    let q8 = grp("Q8");
    let t = character_table(&q8).unwrap();
    let vr = value_ring(&r, &t).unwrap();
    let i = q8.generators()[0];
    assert_eq!(det_character(&q8, &t, 4, i, &vr).unwrap(), vr.ring.one());
}

#[test]
fn det_eval_examples() {
    let r = zp(3, 4);
    let c2 = grp("C2");
    let t = character_table(&c2).unwrap();
    let vr = value_ring(&r, &t).unwrap();
    assert!(det_hom(&GroupRingElement::one(&r, &c2), &t, &vr).unwrap().values.iter().all(|v| *v == vr.ring.one()));
    let g = GroupRingElement::group_element(&r, &c2, 1);
    let u = GroupRingElement::one(&r, &c2).add(&g.scale_int(3));
    let d = det_hom(&u, &t, &vr).unwrap();
    assert_eq!(d.values, vec![r.from_int(4), r.from_int(-2)]);
    // Wedderburn: Z_3[C2] ≅ Z_3 × Z_3 via g ↦ ±1
    for s in 0..10 {
        let x = sample_unit(&r, &c2, UnitKind::General, s).unwrap();
        let (a, b) = (x.coefficient(0), x.coefficient(1));
        assert_eq!(det_hom(&x, &t, &vr).unwrap().values, vec![a.add(&b), a.sub(&b)]);
    }

    let c3 = grp("C3");
    let t = character_table(&c3).unwrap();
    let vr = value_ring(&r, &t).unwrap();
    let zeta_minus_one = vr.zeta.sub(&vr.ring.one());
    for s in 0..10 {
        let u = sample_unit(&r, &c3, UnitKind::OnePlusI, s).unwrap();
        let d = det_hom(&u, &t, &vr).unwrap();
        assert_eq!(d.values[0], vr.ring.one());
        for v in &d.values[1..] {
            // divisible by ζ − 1: (ζ − 1) is the prime above 3 and ζ² + ζ + 1 = 0
            let w = v.sub(&vr.ring.one());
            let q = w.mul(&vr.zeta.pow(2).sub(&vr.ring.one()));
            assert!(q.coeffs().iter().all(|&c| c % 3 == 0), "{q:?}");
            let _ = &zeta_minus_one;
        }
    }
}

#[test]
fn det_is_multiplicative_and_galois_equivariant() {
    let o = CoeffRing::unramified(3, 2, 3).unwrap();
    for name in ["C3", "Heis3"] {
        let g = grp(name);
        let t = character_table(&g).unwrap();
        let vr = value_ring(&o, &t).unwrap();
        for s in 0..5 {
            let u = sample_unit(&o, &g, UnitKind::General, s).unwrap();
            let v = sample_unit(&o, &g, UnitKind::General, s + 70).unwrap();
            let du = det_hom(&u, &t, &vr).unwrap();
            let dv = det_hom(&v, &t, &vr).unwrap();
            assert_eq!(det_hom(&u.mul(&v), &t, &vr).unwrap(), du.combine(&dv));
            let twisted = det_hom(&u.frobenius_coefficients(), &t, &vr).unwrap();
            assert_eq!(twisted, du.frobenius_twist(&g, &t, &vr).unwrap());
        }
    }
}

#[test]
fn gamma_hom_basics() {
    let r = zp(3, 6);
    let g = grp("C9");
    let t = character_table(&g).unwrap();
    let vr = value_ring(&r, &t).unwrap();
    let one = det_hom(&GroupRingElement::one(&r, &g), &t, &vr).unwrap();
    assert!(gamma_hom(&one, &g, &t, &vr).unwrap().values.iter().all(|v| v.is_zero()));
    let f1 = det_hom(&sample_unit(&r, &g, UnitKind::General, 3).unwrap(), &t, &vr).unwrap();
    let f2 = det_hom(&sample_unit(&r, &g, UnitKind::General, 4).unwrap(), &t, &vr).unwrap();
    let lhs = gamma_hom(&f1.combine(&f2), &g, &t, &vr).unwrap();
    let rhs = gamma_hom(&f1, &g, &t, &vr).unwrap().combine(&gamma_hom(&f2, &g, &t, &vr).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn diagram_commutes_on_c3() {
    let r = zp(3, 4);
    let g = grp("C3");
    let units: Vec<_> = (0..50).map(|s| sample_unit(&r, &g, UnitKind::General, s).unwrap()).collect();
    let rep = commutation_check(&units, Scenario::new("C3", 3, 1, 1, 4, 0, 50));
    assert!(rep.passed(), "{rep:?}");
    assert_eq!(torsion_det_injective(&r, &g).unwrap(), (6, true));
    let one = vec![GroupRingElement::one(&r, &g)];
    assert!(commutation_check(&one, Scenario::new("C3", 3, 1, 1, 4, 0, 1)).passed());
}

#[test]
fn diagram_commutes_on_heis3_over_unramified() {
    let o = CoeffRing::unramified(3, 2, 3).unwrap();
    let g = grp("Heis3");
    let units: Vec<_> = (0..4).map(|s| sample_unit(&o, &g, UnitKind::General, s).unwrap()).collect();
    let rep = commutation_check(&units, Scenario::new("Heis3", 3, 2, 2, 3, 0, 4));
    assert!(rep.passed(), "{rep:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn prop_gamma_homomorphism_c9(seed in any::<u64>()) {
        let r = zp(3, 4);
        let g = grp("C9");
        let u = sample_unit(&r, &g, UnitKind::General, seed).unwrap();
        let v = sample_unit(&r, &g, UnitKind::General, seed.wrapping_add(1)).unwrap();
        let lhs = gamma_full(&u.mul(&v)).unwrap();
        let rhs = gamma_full(&u).unwrap().add(&gamma_full(&v).unwrap());
        prop_assert!(lhs.eq_mod(&rhs, assertion_precision(3, 4)));
    }
}
