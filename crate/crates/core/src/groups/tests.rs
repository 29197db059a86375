use super::*;
use crate::coeff::arith::valuation;
use crate::linalg::{integer_cokernel, kernel_mod, subquotient_invariants, PrimePower};
use proptest::prelude::*;

fn g(name: &str) -> Group {
    group_by_name(name).unwrap()
}

fn sorted_sizes(g: &Group) -> Vec<usize> {
    let mut s = g.conjugacy().class_sizes.clone();
    s.sort_unstable();
    s
}

#[test]
fn trivial_table() {
    let t = Group::from_table(vec![vec![0]]).unwrap();
    assert_eq!(t.order(), 1);
    assert_eq!(t.num_classes(), 1);
}

#[test]
fn bad_tables_rejected() {
    assert!(matches!(Group::from_table(vec![vec![0, 1], vec![1, 1]]), Err(GroupError::NotAGroup(_))));
    // a Latin square with identity that is not associative
    let loop5 = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    assert!(matches!(Group::from_table(loop5), Err(GroupError::NotAGroup(_))));
}

#[test]
fn catalog_class_data() {
    assert_eq!(sorted_sizes(&g("S3")), vec![1, 2, 3]);
    assert_eq!(sorted_sizes(&g("Q8")), vec![1, 1, 2, 2, 2]);
    assert_eq!(g("D4").num_classes(), 5);
    assert_eq!(g("Heis3").order(), 27);
    assert_eq!(g("Heis3").num_classes(), 11);
    for name in catalog_names() {
        let gr = g(name);
        assert_eq!(gr.name(), *name);
        let total: usize = gr.conjugacy().class_sizes.iter().sum();
        assert_eq!(total, gr.order());
        assert_eq!(gr.conjugacy().classes[0], vec![0]);
    }
    assert!(matches!(group_by_name("Foo"), Err(GroupError::UnknownGroup(_))));
}

#[test]
fn q8_and_d4_are_different() {
    let invols = |gr: &Group| (1..gr.order()).filter(|&x| gr.element_order(x) == 2).count();
    assert_eq!(invols(&g("Q8")), 1);
    assert_eq!(invols(&g("D4")), 5);
}

#[test]
fn abelianizations() {
    let (inv, q, proj) = g("Q8").abelianization();
    assert_eq!(inv, AbelianInvariants::from_cyclic_orders(&[2, 2]));
    let q8 = g("Q8");
    for a in 0..8 {
        for b in 0..8 {
            assert_eq!(proj[q8.mul(a, b)], q.mul(proj[a], proj[b]));
        }
    }
    assert_eq!(g("S3").abelianization().0, AbelianInvariants::from_cyclic_orders(&[2]));
    assert_eq!(g("C2xC4").abelianization().0.divisors, vec![2, 4]);
    assert_eq!(g("Heis3").abelianization().0.divisors, vec![3, 3]);
    let c6 = g("C6");
    let (inv, _, proj) = c6.abelianization();
    assert_eq!(inv.divisors, vec![6]);
    assert_eq!(proj, (0..6).collect::<Vec<_>>());
}

#[test]
fn centers_and_derived() {
    assert_eq!(g("Q8").center().len(), 2);
    assert_eq!(g("Q8").derived_subgroup().len(), 2);
    assert_eq!(g("S3").derived_subgroup().len(), 3);
    assert_eq!(g("Heis3").center().len(), 3);
    let s3 = g("S3");
    let t = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
    assert_eq!(s3.centralizer(t).len(), 2);
}

#[test]
fn p_regular() {
    let s3 = g("S3");
    let orders = |cls: Vec<usize>| {
        let mut o: Vec<usize> = cls.iter().map(|&c| s3.element_order(s3.conjugacy().representatives[c])).collect();
        o.sort_unstable();
        o
    };
    assert_eq!(orders(s3.p_regular_classes(3)), vec![1, 2]);
    assert_eq!(orders(s3.p_regular_classes(2)), vec![1, 3]);
    assert_eq!(g("Q8").p_regular_classes(2), vec![0]);
}

#[test]
fn power_maps() {
    let c4 = g("C4");
    assert_eq!(c4.power_map_on_classes(2), vec![0, 2, 0, 2]);
    assert_eq!(c4.power_map_on_classes(1), vec![0, 1, 2, 3]);
    let q8 = g("Q8");
    let z = q8.center()[1];
    let pm = q8.power_map_on_classes(2);
    for (c, &img) in pm.iter().enumerate() {
        let size = q8.conjugacy().class_sizes[c];
        if size > 1 {
            assert_eq!(img, q8.class_of(z));
        }
    }
}

#[test]
fn omega_sets() {
    let c3 = g("C3");
    assert!(c3.omega_set(1, 3).unwrap().is_empty());
    let q8 = g("Q8");
    let z = q8.central_order_p_element(2).unwrap();
    let omega = q8.omega_set(z, 2).unwrap();
    let expected: Vec<usize> = (0..8).filter(|&x| q8.element_order(x) == 4).collect();
    assert_eq!(omega, expected);
    let d4 = g("D4");
    let z = d4.central_order_p_element(2).unwrap();
    let om = d4.omega_set(z, 2).unwrap();
    // exhaustive: g ~ zg
    let brute: Vec<usize> = (0..8).filter(|&x| (0..8).any(|y| d4.conj(y, x) == d4.mul(z, x))).collect();
    assert_eq!(om, brute);
    assert_eq!(om.len(), 6);
    for &w in &om {
        for y in 0..8 {
            assert!(om.contains(&d4.conj(y, w)));
        }
    }
    let nonc = (0..8).find(|&x| d4.conjugacy().class_sizes[d4.class_of(x)] > 1).unwrap();
    assert_eq!(d4.omega_set(nonc, 2), Err(GroupError::NotCentral));
}

#[test]
fn k_conjugacy() {
    let q8 = g("Q8");
    let k = q8.k_conjugacy_bookkeeping(2, 1);
    assert_eq!(k.len(), 1);
    assert_eq!(k[0].representative, 0);
    assert_eq!(k[0].normalizer.len(), 8);
    assert_eq!(k[0].centralizer.len(), 8);

    let c3 = g("C3");
    let k = c3.k_conjugacy_bookkeeping(2, 1);
    assert_eq!(k.len(), 2);
    assert_eq!(k[1].fused_classes, vec![1, 2]);
    // over the quadratic extension 4 ≡ 1 mod 3 and nothing fuses
    assert_eq!(c3.k_conjugacy_bookkeeping(2, 2).len(), 3);

    let s3 = g("S3");
    let k = s3.k_conjugacy_bookkeeping(2, 1);
    assert_eq!(k.len(), 2);
    assert_eq!(s3.element_order(k[1].representative), 3);
    assert_eq!(k[1].normalizer.len(), 6);
    assert_eq!(k[1].centralizer.len(), 3);
}

#[test]
fn presentations_from_text() {
    let pres = Presentation::parse("gens 2\n# dihedral\na^4\nb^2\nb a b^-1 a\n").unwrap();
    let d = Group::from_presentation(&pres, 1000).unwrap();
    assert_eq!(d.order(), 8);
    assert_eq!(d.num_classes(), 5);
    let pres = Presentation::parse("gens 2\na^2\nb^3\n").unwrap();
    assert!(matches!(Group::from_presentation(&pres, 500), Err(GroupError::EnumerationBudgetExceeded(_))));
}

#[test]
fn invariants_arithmetic() {
    let a = AbelianInvariants::from_cyclic_orders(&[4, 6, 2]);
    assert_eq!(a.divisors, vec![2, 2, 12]);
    assert_eq!(a.order(), 48);
    assert_eq!(a.p_part(2).divisors, vec![2, 2, 4]);
    assert_eq!(a.torsion(2).divisors, vec![2, 2, 2]);
    assert_eq!(a.to_string(), "Z/2 x Z/2 x Z/12");
    assert_eq!(AbelianInvariants::trivial().to_string(), "1");
    assert_eq!(a.cancel(&AbelianInvariants::from_cyclic_orders(&[4])).unwrap().divisors, vec![2, 6]);
    assert!(a.cancel(&AbelianInvariants::from_cyclic_orders(&[8])).is_none());
    assert_eq!(AbelianInvariants::of_abelian_group(&g("C2xC4xC4")).divisors, vec![2, 4, 4]);
}

/// Normalized 2-cocycles on all of G × G; only for small groups.
fn full_system_h2(gr: &Group, p: u64, symmetric: bool) -> Vec<u32> {
    let n = gr.order();
    let pp = PrimePower::new(p, valuation(n as u64, p).max(1));
    let m = pp.m;
    let idx = |a: usize, b: usize| (a - 1) * (n - 1) + (b - 1);
    let dim = (n - 1) * (n - 1);
    let add = |row: &mut Vec<u64>, a: usize, b: usize, c: u64| {
        if a != 0 && b != 0 {
            let i = idx(a, b);
            row[i] = (row[i] + c) % m;
        }
    };
    let mut rows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut r = vec![0u64; dim];
                add(&mut r, b, c, 1);
                add(&mut r, a, gr.mul(b, c), 1);
                add(&mut r, gr.mul(a, b), c, m - 1);
                add(&mut r, a, b, m - 1);
                rows.push(r);
            }
        }
    }
    if symmetric {
        for a in 1..n {
            for b in 1..n {
                if gr.mul(a, b) == gr.mul(b, a) {
                    let mut r = vec![0u64; dim];
                    add(&mut r, a, b, 1);
                    add(&mut r, b, a, m - 1);
                    rows.push(r);
                }
            }
        }
    }
    let z = kernel_mod(&rows, dim, pp).0;
    let mut bnd = Vec::new();
    for c in 1..n {
        let mut r = vec![0u64; dim];
        for a in 0..n {
            for b in 0..n {
                let mut v = 0u64;
                if a == c {
                    v += 1;
                }
                if b == c {
                    v += 1;
                }
                if gr.mul(a, b) == c {
                    v += m - 1;
                }
                add(&mut r, a, b, v % m);
            }
        }
        bnd.push(r);
    }
    subquotient_invariants(&z, &bnd, dim, pp)
}

fn exterior_square(orders: &[u64]) -> AbelianInvariants {
    // A ∧ A for A = ⊕ Z/d_i: generators e_i ∧ e_j (i < j), relations d_i (e_i ∧ e_j) and d_j (e_i ∧ e_j)
    let k = orders.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut rows = Vec::new();
    for (t, &(i, j)) in pairs.iter().enumerate() {
        for d in [orders[i], orders[j]] {
            let mut r = vec![0i64; pairs.len()];
            r[t] = d as i64;
            rows.push(r);
        }
    }
    AbelianInvariants::from_cyclic_orders(&integer_cokernel(&rows, pairs.len()))
}

fn abelian_p_groups(p: u64, max_order: u64) -> Vec<Vec<u64>> {
    // partitions of exponents
    fn parts(n: u32, max: u32, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            parts(n - k, k, out, cur);
            cur.pop();
        }
    }
    let mut res = vec![];
    let mut e = 1;
    while p.pow(e) <= max_order {
        let mut ps = vec![];
        parts(e, e, &mut ps, &mut vec![]);
        for part in ps {
            res.push(part.iter().map(|&k| p.pow(k)).collect());
        }
        e += 1;
    }
    res
}

fn abelian_group(orders: &[u64]) -> Group {
    let name = orders.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("x");
    g(&name)
}

#[test]
fn h2_matches_full_oracle() {
    for name in ["C2", "C4", "C2xC2", "C2xC4", "C3xC3", "D4", "Q8", "C2xC2xC2", "S3", "C9"] {
        let gr = g(name);
        for (p, _) in crate::coeff::arith::factor(gr.order() as u64) {
            let ours = homology_at_prime(&gr, p);
            assert_eq!(ours.h2_cohomology, full_system_h2(&gr, p, false), "{name} p={p}");
            let sym = AbelianInvariants::from_p_exponents(p, &full_system_h2(&gr, p, true));
            let ab = gr.abelianization().0.p_part(p);
            assert_eq!(ours.quotient, sym.cancel(&ab).unwrap(), "{name} p={p}");
        }
    }
}

#[test]
fn schur_examples() {
    let z2 = AbelianInvariants::from_cyclic_orders(&[2]);
    for n in [1, 2, 3, 4, 5, 8, 9, 16] {
        assert!(schur_multiplier(&g(&format!("C{n}"))).unwrap().is_trivial());
    }
    assert_eq!(schur_multiplier(&g("C2xC2")).unwrap(), z2);
    assert!(schur_multiplier(&g("Q8")).unwrap().is_trivial());
    assert_eq!(schur_multiplier(&g("D4")).unwrap(), z2);
    assert!(schur_multiplier(&g("S3")).unwrap().is_trivial());
    assert_eq!(schur_multiplier(&g("Heis3")).unwrap().divisors, vec![3, 3]);
    assert_eq!(schur_multiplier(&g("C2xC2xC2")).unwrap().divisors, vec![2, 2, 2]);
}

#[test]
fn schur_matches_exterior_square() {
    for p in [2, 3] {
        for orders in abelian_p_groups(p, 32) {
            let gr = abelian_group(&orders);
            assert_eq!(schur_multiplier(&gr).unwrap(), exterior_square(&orders), "{}", gr.name());
        }
    }
    assert_eq!(schur_multiplier(&g("C2xC6")).unwrap(), exterior_square(&[2, 6]));
}

#[test]
fn sk1_trivial_on_catalog() {
    for p in [2, 3] {
        for orders in abelian_p_groups(p, 32) {
            let gr = abelian_group(&orders);
            assert!(sk1_pgroup(&gr, p).unwrap().is_trivial());
            assert_eq!(h2_ab_part(&gr).unwrap(), schur_multiplier(&gr).unwrap());
        }
        for gr in catalog_p_groups(p) {
            let h2 = schur_multiplier(&gr).unwrap();
            let hab = h2_ab_part(&gr).unwrap();
            let q = sk1_pgroup(&gr, p).unwrap();
            assert_eq!(hab.order() * q.order(), h2.order());
            assert!(q.is_trivial(), "{}", gr.name());
        }
    }
    assert!(matches!(sk1_pgroup(&g("S3"), 2), Err(GroupError::NotAPGroup(_))));
}

#[test]
fn cocycle_values_are_cocycles() {
    let gr = g("Q8");
    let sys = CocycleSystem::new(&gr, 2);
    let m = sys.pp.m;
    for x in sys.cocycles().iter().take(6) {
        let f = sys.cocycle_values(&gr, x);
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    let lhs = (f[b][c] + f[a][gr.mul(b, c)]) % m;
                    let rhs = (f[gr.mul(a, b)][c] + f[a][b]) % m;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn power_maps_compose(k in -6i64..7, l in -6i64..7, idx in 0usize..6) {
        let names = ["C4", "Q8", "D4", "S3", "Heis3", "C3xC9"];
        let gr = g(names[idx]);
        let pk = gr.power_map_on_classes(k);
        let pl = gr.power_map_on_classes(l);
        let pkl = gr.power_map_on_classes(k * l);
        for c in 0..gr.num_classes() {
            prop_assert_eq!(pkl[c], pl[pk[c]]);
        }
        // well defined on every class member
        for (c, cls) in gr.conjugacy().classes.iter().enumerate() {
            for &x in cls {
                prop_assert_eq!(gr.class_of(gr.pow(x, k)), pk[c]);
            }
        }
    }

    #[test]
    fn invariants_normalize(orders in proptest::collection::vec(1u64..40, 0..5)) {
        let a = AbelianInvariants::from_cyclic_orders(&orders);
        prop_assert_eq!(a.order(), orders.iter().product::<u64>());
        for w in a.divisors.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        prop_assert!(a.divisors.iter().all(|&d| d > 1));
    }
}
