use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sq_core::catalog::{build_appendix_group, build_order_p3_group, table2_table3_automorphism, HeisenbergAuto, P3Kind};
use sq_core::construct::*;
use sq_core::group::{self, abelian, cyclic, Automorphism, GroupTable, Subgroup};
use sq_core::iso::quandle_isomorphic;
use sq_core::partition::Partition;
use sq_core::perm::{Perm, PermGroup};
use sq_core::quandle::*;

const CAP: usize = 2_000_000;

fn aff(moduli: &[u64], m: &[&[i64]]) -> QuandleTable {
    let (g, c) = abelian(moduli);
    let rows: Vec<Vec<i64>> = m.iter().map(|r| r.to_vec()).collect();
    affine(&g, &Automorphism::new(&g, c.matrix_map(&rows)).unwrap()).unwrap()
}

fn aff_cyclic(n: u64, k: i64) -> QuandleTable {
    aff(&[n], &[&[k]])
}

fn heis_quandle(p: u64, kind: HeisenbergAuto) -> QuandleTable {
    let he = build_order_p3_group(P3Kind::Heisenberg, p).unwrap();
    let f = table2_table3_automorphism(&he, &kind).unwrap();
    principal(&he.table, &f).unwrap()
}

fn s4() -> GroupTable {
    let g = PermGroup::generate(4, &[Perm(vec![1, 0, 2, 3]), Perm(vec![1, 2, 3, 0])], 100).unwrap();
    g.to_group_table().unwrap()
}

#[test]
fn axiom_flags() {
    let p = projection(4).unwrap();
    assert!(p.flags().is_quandle && !p.flags().is_connected);
    let d3 = core(&cyclic(3)).unwrap();
    let f = d3.flags();
    assert!(f.is_quandle && f.is_latin && f.is_involutory && f.is_connected && f.is_faithful);
    // a latin square that is not self-distributive
    let bad = QuandleTable::from_fn(5, |x, y| (x + y) % 5).unwrap();
    assert!(bad.flags().is_latin && !bad.flags().is_rack);
    let (x, y, z) = bad.rack_witness().unwrap();
    assert_ne!(bad.op(x, bad.op(y, z)), bad.op(bad.op(x, y), bad.op(x, z)));
    assert!(matches!(validate_left_quasigroup(&[vec![0, 0], vec![0, 1]]), Err(sq_core::Error::RowNotBijective(0))));
    let one = projection(1).unwrap();
    assert!(one.flags().is_connected && one.flags().is_latin);
}

#[test]
fn multiplication_groups() {
    assert_eq!(dis(&core(&cyclic(5)).unwrap(), CAP).unwrap().order(), 5);
    assert_eq!(dis(&aff(&[3, 3], &[&[2, 0], &[0, 2]]), CAP).unwrap().order(), 9);
    assert!(lmlt(&projection(4).unwrap(), CAP).unwrap().is_trivial());
    let q = aff_cyclic(9, 2);
    let d = dis(&q, CAP).unwrap();
    let g1 = d.derived_subgroup(CAP).unwrap();
    assert!(orbit_congruence(&q, &g1, true).unwrap().is_discrete());
    assert!(orbit_congruence(&q, &lmlt(&q, CAP).unwrap(), true).unwrap().is_full());
}

#[test]
fn orbit_congruence_checks_normality() {
    // a single translation subgroup that conjugation by L_x moves
    let q = core(&s4()).unwrap();
    let t = PermGroup::generate(24, &[q.left(1).compose(&q.left(0).inverse())], CAP).unwrap();
    let l = lmlt(&q, CAP).unwrap();
    if !t.is_normalized_by(&l) {
        assert!(matches!(orbit_congruence(&q, &t, true), Err(sq_core::Error::NotNormal(_, _))));
    }
    assert!(orbit_congruence(&q, &t, false).is_ok());
}

#[test]
fn cayley_kernels() {
    assert!(cayley_kernel(&core(&cyclic(5)).unwrap()).is_discrete());
    assert!(cayley_kernel(&projection(3).unwrap()).is_full());
    let q = heis_quandle(5, HeisenbergAuto::Dtilde(2, 3));
    assert_eq!(q.size(), 125);
    let k = cayley_kernel(&q);
    assert!(k.class_sizes().iter().all(|&s| s == 5));
    assert_eq!(k.class_count(), 25);
}

#[test]
fn generated_congruences() {
    let q = core(&cyclic(9)).unwrap();
    assert!(congruence_generated(&q, &[]).is_discrete());
    assert!(congruence_generated(&core(&cyclic(5)).unwrap(), &[(0, 2)]).is_full());
    let c = congruence_generated(&q, &[(0, 3)]);
    assert_eq!(c, Partition::from_labels(&(0..9).map(|x| x % 3).collect::<Vec<_>>()));
    check_congruence(&q, &c).unwrap();
    let broken = Partition::from_labels(&[0, 0, 1, 1, 1, 1, 1, 1, 1]);
    assert!(matches!(check_congruence(&q, &broken), Err(sq_core::Error::NotCongruence(..))));
    assert!(quotient_quandle(&q, &broken).is_err());
}

#[test]
fn quotients() {
    let q = aff_cyclic(9, 2);
    let (same, _) = quotient_quandle(&q, &Partition::discrete(9)).unwrap();
    assert_eq!(same, q);
    let (pt, _) = quotient_quandle(&q, &Partition::full(9)).unwrap();
    assert_eq!(pt.size(), 1);
    let phi = Partition::from_labels(&(0..9).map(|x| x % 3).collect::<Vec<_>>());
    let (q3, map) = quotient_quandle(&q, &phi).unwrap();
    assert!(quandle_isomorphic(&q3, &aff_cyclic(3, 2)).is_some());
    assert!(q.is_hom_to(&q3, &map).is_none());
}

#[test]
fn relative_displacement_groups() {
    let q = aff(&[5, 5], &[&[2, 0], &[0, 2]]);
    let d = dis(&q, CAP).unwrap();
    assert!(dis_rel(&q, &Partition::discrete(25), CAP).unwrap().is_trivial());
    assert!(dis_ker(&q, &Partition::discrete(25), CAP).unwrap().is_trivial());
    assert!(dis_rel(&q, &Partition::full(25), CAP).unwrap().same_elements(&d));
    // Dis^γ = γ₁(Dis), on an affine and a non-affine principal quandle
    for q in [q.clone(), heis_quandle(5, HeisenbergAuto::Dtilde(2, 2)), heis_quandle(3, HeisenbergAuto::Gtilde(2))] {
        let g = gamma_q(&q, CAP).unwrap();
        let derived = dis(&q, CAP).unwrap().derived_subgroup(CAP).unwrap();
        assert!(dis_ker(&q, &g, CAP).unwrap().same_elements(&derived));
        let (quot, _) = quotient_quandle(&q, &g).unwrap();
        assert!(quot.is_connected());
        let dq = dis(&quot, CAP).unwrap();
        assert!(dq.derived_subgroup(CAP).unwrap().is_trivial());
    }
}

#[test]
fn gamma_of_abelian_and_heisenberg() {
    assert!(gamma_q(&aff_cyclic(9, 2), CAP).unwrap().is_discrete());
    let q = heis_quandle(5, HeisenbergAuto::Dtilde(2, 2));
    let g = gamma_q(&q, CAP).unwrap();
    // classes are the cosets of the center
    assert_eq!(g.class_count(), 25);
    assert!(matches!(gamma_q(&projection(3).unwrap(), CAP), Err(sq_core::Error::NotConnected)));
}

#[test]
fn power_displacement_orbits() {
    let inv = core(&cyclic(7)).unwrap();
    assert!(hn_congruence(&inv, 2).is_discrete());
    assert!(hn_group(&inv, 2, CAP).unwrap().is_trivial());
    let q = aff_cyclic(9, 2);
    assert_eq!(hn_congruence(&q, 1), dis(&q, CAP).unwrap().orbits());
    // L_x^3 L_0^{-3} is the translation by -7x, and 7 is a unit mod 9
    let h3 = hn_group(&q, 3, CAP).unwrap();
    assert_eq!(h3.order(), 9);
    assert!(hn_congruence(&q, 3).is_full());
    assert_eq!(hn_congruence(&q, 2), Partition::from_labels(&(0..9).map(|x| x % 3).collect::<Vec<_>>()));
    // on Aff(Z_m, f) the generators translate by (1 - f^n)(x - y)
    for m in [8u64, 9, 12, 25, 27] {
        for f in (1..m).filter(|&f| sq_core::arith::gcd(f, m) == 1) {
            for n in 1..=4u32 {
                let step = (m + 1 - f.pow(n) % m) % m;
                let d = sq_core::arith::gcd(step, m);
                let expect = Partition::from_labels(&(0..m as usize).map(|x| x % d as usize).collect::<Vec<_>>());
                assert_eq!(hn_congruence(&aff_cyclic(m, f as i64), n as i64), expect, "m={m} f={f} n={n}");
            }
        }
    }
}

#[test]
fn generated_subquandles() {
    let q = core(&cyclic(5)).unwrap();
    assert_eq!(subquandle_generated(&q, &[3]), vec![3]);
    assert_eq!(subquandle_generated(&q, &[0, 1]), vec![0, 1, 2, 3, 4]);
    assert_eq!(subquandle_generated(&core(&cyclic(9)).unwrap(), &[0, 3]), vec![0, 3, 6]);
}

#[test]
fn isomorphisms() {
    let q = aff_cyclic(15, 2);
    assert_eq!(quandle_isomorphic(&q, &q).is_some(), true);
    let prod = direct_product(&aff_cyclic(3, 2), &aff_cyclic(5, 2)).unwrap();
    let m = quandle_isomorphic(&q, &prod).unwrap();
    assert!(q.is_hom_to(&prod, &m).is_none());
    assert!(quandle_isomorphic(&aff(&[3, 3], &[&[2, 0], &[0, 2]]), &aff_cyclic(9, 2)).is_none());
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for i in 0..n {
            let mut v = p.clone();
            v.insert(i, n - 1);
            out.push(v);
        }
    }
    out
}

#[test]
fn isomorphism_matches_brute_force() {
    let mut small: Vec<QuandleTable> = Vec::new();
    for n in 2..=6u64 {
        for k in 1..n as i64 {
            let g = cyclic(n);
            if let Ok(f) = Automorphism::power_map(&g, k) {
                small.push(affine(&g, &f).unwrap());
            }
        }
        small.push(core(&cyclic(n)).unwrap());
        small.push(projection(n as usize).unwrap());
    }
    small.push(core(&abelian(&[2, 2]).0).unwrap());
    small.push(conj(&group::metacyclic(3, 2, 2).unwrap()).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for a in &small {
        // a random relabeling is always isomorphic
        let mut perm: Vec<usize> = (0..a.size()).collect();
        perm.shuffle(&mut rng);
        let b = a.relabel(&perm);
        let m = quandle_isomorphic(a, &b).expect("relabeled copy");
        assert!(a.is_hom_to(&b, &m).is_none());
        for c in &small {
            if c.size() != a.size() {
                continue;
            }
            let brute = all_perms(a.size()).iter().any(|p| a.is_hom_to(c, p).is_none());
            assert_eq!(quandle_isomorphic(a, c).is_some(), brute);
            assert_eq!(quandle_isomorphic(c, a).is_some(), brute);
        }
    }
}

#[test]
fn coset_representations() {
    let q = core(&cyclic(5)).unwrap();
    let cr = coset_representation(&q, 0, CAP).unwrap();
    assert_eq!(cr.group.order(), 5);
    assert!(cr.stabilizer.is_trivial());
    for g in 0..5 {
        assert_eq!(cr.conj.apply(g), cr.group.inv(g));
    }
    let check = |q: &QuandleTable| {
        let cr = coset_representation(q, 0, CAP).unwrap();
        let (rq, reps) = coset_quandle(&cr.group, &cr.stabilizer, &cr.conj).unwrap();
        let map: Vec<usize> = reps.iter().map(|&g| cr.point_of(g)).collect();
        assert!(rq.is_hom_to(q, &map).is_none());
        let mut sorted = map.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..q.size()).collect::<Vec<_>>());
    };
    check(&heis_quandle(5, HeisenbergAuto::Gtilde(2)));
    check(&aff(&[3, 3], &[&[2, 0], &[0, 2]]));
    let s4 = s4();
    let cq = conj(&s4).unwrap();
    let transpositions: Vec<usize> =
        (0..24).filter(|&x| s4.element_order(x) == 2 && (0..24).filter(|&y| cq.op(y, x) != x).count() > 0).collect();
    // conjugacy class of transpositions: 6 involutions commuting with exactly 4 elements
    let tr: Vec<usize> = transpositions
        .into_iter()
        .filter(|&x| (0..24).filter(|&y| s4.mul(x, y) == s4.mul(y, x)).count() == 4)
        .collect();
    assert_eq!(tr.len(), 6);
    let sub = subquandle_table(&cq, &subquandle_generated(&cq, &tr)).unwrap();
    assert_eq!(sub.size(), 6);
    assert!(sub.is_connected());
    check(&sub);
    assert!(!is_principal(&sub, CAP).unwrap());
    assert!(is_principal(&aff_cyclic(9, 2), CAP).unwrap());
    assert!(is_principal(&projection(1).unwrap(), CAP).unwrap());
}

#[test]
fn constructors() {
    let d3 = aff_cyclic(3, 2);
    assert!(d3.is_connected());
    let a94 = aff_cyclic(9, 4);
    assert!(!a94.flags().is_latin);
    let q = aff(&[5, 5], &[&[2, 0], &[0, 3]]);
    assert_eq!(q.size(), 25);
    assert!(q.is_connected());
    let z5 = cyclic(5);
    let inv = Automorphism::power_map(&z5, -1).unwrap();
    assert_eq!(coset_quandle(&z5, &Subgroup::trivial(5), &inv).unwrap().0, core(&z5).unwrap());
    // coset quandle over the center of the Heisenberg group
    let he = build_order_p3_group(P3Kind::Heisenberg, 5).unwrap();
    let f = table2_table3_automorphism(&he, &HeisenbergAuto::Dtilde(2, 3)).unwrap();
    let z = group::center(&he.table);
    assert_eq!(coset_quandle(&he.table, &z, &f).unwrap().0.size(), 25);
    assert!(matches!(
        coset_quandle(&he.table, &Subgroup::whole(125), &f),
        Err(sq_core::Error::HNotFixed)
    ));
    // principal quandle over G3(3) with u1 = v2 = 2
    let g3 = build_appendix_group(3, 3, None).unwrap();
    let f3 = g3.automorphism_from_free(&[g3.eval_word(&[(0, 2)]), g3.eval_word(&[(1, 2)])]).unwrap();
    let q3 = principal(&g3.table, &f3).unwrap();
    assert_eq!(q3.size(), 81);
    assert!(q3.flags().is_quandle);
}

#[test]
fn conjugation_and_cores() {
    let (a, _) = abelian(&[3, 3]);
    assert_eq!(conj(&a).unwrap(), projection(9).unwrap());
    let he3 = build_order_p3_group(P3Kind::Heisenberg, 3).unwrap();
    let cq = conj(&he3.table).unwrap();
    assert!(cq.flags().is_quandle);
    assert_eq!(cayley_kernel(&cq).class_count(), 9);
    let z5 = cyclic(5);
    let f2 = Automorphism::power_map(&z5, 2).unwrap();
    assert_eq!(conj_f(&z5, &f2).unwrap(), affine(&z5, &f2).unwrap());
    assert_eq!(core(&cyclic(3)).unwrap(), aff_cyclic(3, 2));
    let g21 = group::metacyclic(7, 3, 2).unwrap();
    let c21 = core(&g21).unwrap();
    assert!(c21.flags().is_latin && c21.flags().is_involutory && c21.flags().is_quandle);
    assert_eq!(c21.size(), 21);
    assert_eq!(core(&cyclic(2)).unwrap(), projection(2).unwrap());
    // latin iff squaring is bijective
    for g in [cyclic(4), cyclic(9), abelian(&[2, 2]).0, s4(), g21.clone()] {
        let sq: std::collections::BTreeSet<usize> = (0..g.order()).map(|x| g.mul(x, x)).collect();
        let c = core(&g).unwrap();
        assert_eq!(c.flags().is_latin, sq.len() == g.order());
        assert!(c.flags().is_involutory && c.flags().is_quandle);
    }
}

#[test]
fn products_and_components() {
    let q = aff_cyclic(7, 3);
    assert_eq!(direct_product(&q, &projection(1).unwrap()).unwrap(), q);
    let z15 = cyclic(15);
    let f = Automorphism::power_map(&z15, 2).unwrap();
    let (comps, iso) = p_components(&z15, &f).unwrap();
    assert_eq!(comps.iter().map(|c| c.prime).collect::<Vec<_>>(), vec![3, 5]);
    assert!(quandle_isomorphic(&comps[0].quandle, &aff_cyclic(3, 2)).is_some());
    assert!(quandle_isomorphic(&comps[1].quandle, &aff_cyclic(5, 2)).is_some());
    let prod = direct_product(&comps[0].quandle, &comps[1].quandle).unwrap();
    assert!(principal(&z15, &f).unwrap().is_hom_to(&prod, &iso).is_none());
    // Heisenberg(3) × Z_5
    let he = build_order_p3_group(P3Kind::Heisenberg, 3).unwrap();
    let fh = table2_table3_automorphism(&he, &HeisenbergAuto::Dtilde(2, 2)).unwrap();
    let g = group::direct_product(&he.table, &z5());
    let image: Vec<u32> = (0..135).map(|x| (fh.apply(x / 5) * 5 + (2 * (x % 5)) % 5) as u32).collect();
    let fg = Automorphism::new(&g, image).unwrap();
    let (comps, iso) = p_components(&g, &fg).unwrap();
    assert_eq!(comps.iter().map(|c| c.quandle.size()).collect::<Vec<_>>(), vec![27, 5]);
    let prod = direct_product(&comps[0].quandle, &comps[1].quandle).unwrap();
    assert!(principal(&g, &fg).unwrap().is_hom_to(&prod, &iso).is_none());
    assert!(matches!(p_components(&s4(), &Automorphism::identity(24)), Err(sq_core::Error::NotNilpotent)));
}

fn z5() -> GroupTable {
    cyclic(5)
}

fn check_qn(q: &QuandleTable, c: &QnConstruction) {
    let (quot, cls) = quotient_quandle(q, &c.orbits).unwrap();
    assert!(c.full.is_hom_to(q, &c.full_to_q).is_none());
    assert!(c.full.is_hom_to(&c.qn, &c.full_to_qn).is_none());
    assert!(c.qn.is_hom_to(&quot, &c.qn_to_quotient).is_none());
    for h in 0..c.full.size() {
        assert_eq!(cls[c.full_to_q[h]], c.qn_to_quotient[c.full_to_qn[h]]);
    }
    // kernel of Q_N → Q/O_N lies in the Cayley kernel of Q_N
    let ck = cayley_kernel(&c.qn);
    let ker = Partition::from_labels(&c.qn_to_quotient);
    assert!(ker.refines(&ck));
}

#[test]
fn qn_construction() {
    let q = aff(&[3, 3], &[&[2, 0], &[0, 2]]);
    let triv = PermGroup::generate(9, &[], CAP).unwrap();
    let c = build_qn(&q, &triv, 0, CAP).unwrap();
    check_qn(&q, &c);
    assert_eq!(c.qn.size(), 9);
    let d = dis(&q, CAP).unwrap();
    let c = build_qn(&q, &d, 0, CAP).unwrap();
    check_qn(&q, &c);
    assert_eq!(c.qn.size(), 1);
    let q = heis_quandle(5, HeisenbergAuto::Dtilde(2, 3));
    let n = dis_rel(&q, &cayley_kernel(&q), CAP).unwrap();
    let c = build_qn(&q, &n, 0, CAP).unwrap();
    check_qn(&q, &c);
    let foreign = PermGroup::generate(125, &[Perm((0..125u32).map(|x| (x + 1) % 125).collect())], CAP).unwrap();
    assert!(matches!(build_qn(&q, &foreign, 0, CAP), Err(sq_core::Error::NotInDis)));
}

#[test]
fn specs_build() {
    let spec = QuandleSpec::Affine {
        group: GroupSpec::Abelian { moduli: vec![5, 5] },
        auto: AutoSpec::Matrix { rows: vec![vec![2, 0], vec![0, 3]] },
    };
    assert_eq!(spec.build().unwrap(), aff(&[5, 5], &[&[2, 0], &[0, 3]]));
    let spec = QuandleSpec::Principal {
        group: GroupSpec::OrderP3 { group: P3Kind::Heisenberg, p: 5 },
        auto: AutoSpec::Heisenberg { map: HeisenbergAuto::Gtilde(2) },
    };
    assert_eq!(spec.build().unwrap(), heis_quandle(5, HeisenbergAuto::Gtilde(2)));
    let spec = QuandleSpec::Affine { group: GroupSpec::Metacyclic { n: 7, m: 3, r: 2 }, auto: AutoSpec::Identity };
    assert!(matches!(spec.build(), Err(sq_core::Error::NotAbelian)));
}
