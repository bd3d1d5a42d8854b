use sq_core::catalog::{build_order_p3_group, table2_table3_automorphism, HeisenbergAuto, P3Kind};
use sq_core::cocycle::AbelianCocycle;
use sq_core::cohomology::is_coboundary_by_elimination;
use sq_core::construct::{affine, core, direct_product, p_components, principal, GroupSpec};
use sq_core::families::{self, FamilyTable};
use sq_core::group::{abelian, all_automorphisms, cyclic, generating_set, metacyclic, Automorphism, GroupTable};
use sq_core::iso::quandle_isomorphic;
use sq_core::partition::Partition;
use sq_core::perm::{Perm, PermGroup};
use sq_core::quandle::{cayley_kernel, congruence_generated, dis, QuandleTable};
use sq_core::simply::*;
use sq_core::Error;

fn opts() -> DecideOptions {
    DecideOptions::default()
}

fn mat(moduli: &[u64], rows: Vec<Vec<i64>>) -> (GroupTable, Automorphism) {
    let (g, c) = abelian(moduli);
    let f = Automorphism::new(&g, c.matrix_map(&rows)).unwrap();
    (g, f)
}

fn aff(moduli: &[u64], rows: Vec<Vec<i64>>) -> QuandleTable {
    let (g, f) = mat(moduli, rows);
    affine(&g, &f).unwrap()
}

fn aff_cyclic(n: u64, k: i64) -> QuandleTable {
    let g = cyclic(n);
    affine(&g, &Automorphism::power_map(&g, k).unwrap()).unwrap()
}

#[test]
fn h2_verdicts() {
    let v = decide_h2(&aff_cyclic(9, 2), None, &opts()).unwrap();
    assert_eq!((v.verdict, v.method, v.primes.clone()), (Verdict::SimplyConnected, Method::H2, vec![3]));
    assert!(v.witness.is_none());

    let q = aff(&[3, 3], vec![vec![2, 0], vec![0, 2]]);
    let v = decide_h2(&q, None, &opts()).unwrap();
    assert_eq!(v.verdict, Verdict::Not);
    let Some(Witness::Cocycle { prime, rows }) = v.witness else { panic!("cocycle witness expected") };
    assert_eq!(prime, 3);
    let theta = AbelianCocycle::new(&q, 3, &rows).unwrap();
    assert!(!is_coboundary_by_elimination(&q, &theta));

    let q = aff(&[5, 5], vec![vec![4, 1], vec![0, 4]]);
    assert_eq!(decide_h2(&q, None, &opts()).unwrap().verdict, Verdict::Not);
}

#[test]
fn h2_prime_sets() {
    let q = aff_cyclic(15, 2);
    assert_eq!(decide_h2(&q, None, &opts()).unwrap().primes, vec![3, 5]);
    assert_eq!(decide_h2(&q, Some(&[3]), &opts()).unwrap().verdict, Verdict::Undecided);
    assert_eq!(decide_h2(&q, Some(&[3, 5, 7]), &opts()).unwrap().verdict, Verdict::SimplyConnected);
    assert!(matches!(decide_h2(&q, Some(&[4]), &opts()), Err(Error::BadParams(_))));
    assert_eq!(decide_h2(&aff_cyclic(4, 3), None, &opts()), Err(Error::NotConnected));
    let one = aff_cyclic(1, 1);
    assert_eq!(decide_h2(&one, None, &opts()).unwrap().verdict, Verdict::SimplyConnected);

    // principal over the non-nilpotent alternating group of degree 4
    let a4 = PermGroup::generate(4, &[Perm(vec![1, 2, 0, 3]), Perm(vec![1, 0, 3, 2])], 100)
        .unwrap()
        .to_group_table()
        .unwrap();
    let q = all_automorphisms(&a4, &generating_set(&a4), 1000)
        .unwrap()
        .iter()
        .map(|f| principal(&a4, f).unwrap())
        .find(|q| q.is_connected())
        .unwrap();
    assert_eq!(decide_h2(&q, None, &opts()), Err(Error::PrimesUnbounded));
    assert_ne!(decide_h2(&q, Some(&[2, 3]), &opts()).unwrap().verdict, Verdict::SimplyConnected);
}

#[test]
fn not_principal_witness() {
    let g = metacyclic(7, 3, 2).unwrap();
    let q = core(&g).unwrap();
    let v = decide_h2(&q, None, &opts()).unwrap();
    assert_eq!(v.verdict, Verdict::Not);
    let Some(Witness::NotPrincipal { point, displacement }) = v.witness else { panic!() };
    let d = dis(&q, 1 << 20).unwrap();
    assert!(d.contains(&displacement));
    assert_eq!(displacement[point] as usize, point);
    assert!(!Perm(displacement).is_identity());
}

fn cover_witness(q: &QuandleTable, g: &GroupTable, f: &Automorphism) -> Witness {
    let v = decide_covers(g, f, &opts()).unwrap();
    assert_eq!((v.verdict, v.method), (Verdict::Not, Method::Covers));
    let w = v.witness.unwrap();
    validate_cover_witness(q, &w).unwrap();
    w
}

#[test]
fn covers_of_size_p2() {
    let (g, f) = mat(&[5, 5], vec![vec![2, 0], vec![0, 3]]);
    let q = affine(&g, &f).unwrap();
    let w = cover_witness(&q, &g, &f);
    let Witness::Cover { group, auto, fix_order, cover_size, .. } = &w else { panic!() };
    assert_eq!(*group, GroupSpec::OrderP3 { group: P3Kind::Heisenberg, p: 5 });
    assert_eq!((*fix_order, *cover_size), (5, 125));
    // the cover is the principal quandle of the diagonal Heisenberg map
    let he = build_order_p3_group(P3Kind::Heisenberg, 5).unwrap();
    let found = principal(&he.table, &Automorphism::new(&he.table, auto.clone()).unwrap()).unwrap();
    let model = principal(&he.table, &table2_table3_automorphism(&he, &HeisenbergAuto::Dtilde(2, 3)).unwrap()).unwrap();
    assert!(quandle_isomorphic(&found, &model).is_some());

    let (g, f) = mat(&[5, 5], vec![vec![2, 0], vec![0, 2]]);
    let v = decide_covers(&g, &f, &opts()).unwrap();
    assert_eq!((v.verdict, v.witness), (Verdict::SimplyConnected, None));
}

#[test]
fn covers_of_size_p3() {
    let (g, f) = mat(&[5, 5, 5], vec![vec![4, 1, 0], vec![0, 4, 1], vec![0, 0, 4]]);
    let q = affine(&g, &f).unwrap();
    let Witness::Cover { group, .. } = cover_witness(&q, &g, &f) else { panic!() };
    assert_eq!(group, GroupSpec::Appendix { id: 12, p: 5 });

    // G(b,c) with bc = 1: a cover exists although b ≠ -1
    let (g, f) = mat(&[5, 5, 5], vec![vec![2, 1, 0], vec![0, 2, 0], vec![0, 0, 3]]);
    let q = affine(&g, &f).unwrap();
    cover_witness(&q, &g, &f);
    assert_eq!(decide_h2(&q, None, &opts()).unwrap().verdict, Verdict::Not);

    // an irreducible cubic at p = 3: the search is exhausted
    let (g, f) = mat(&[3, 3, 3], vec![vec![0, 1, 0], vec![0, 0, 1], vec![2, 1, 0]]);
    let q = affine(&g, &f).unwrap();
    assert_eq!(decide_covers(&g, &f, &opts()).unwrap().verdict, Verdict::SimplyConnected);
    assert_eq!(decide_h2(&q, None, &opts()).unwrap().verdict, Verdict::SimplyConnected);
}

#[test]
fn covers_input_errors() {
    let g = cyclic(27);
    let f = Automorphism::power_map(&g, 2).unwrap();
    assert!(decide_covers(&g, &f, &opts()).is_ok());
    let g = cyclic(81);
    let f = Automorphism::power_map(&g, 2).unwrap();
    assert!(matches!(decide_covers(&g, &f, &opts()), Err(Error::UnsupportedSize(_))));
    let g = cyclic(15);
    let f = Automorphism::power_map(&g, 2).unwrap();
    assert!(matches!(decide_covers(&g, &f, &opts()), Err(Error::UnsupportedSize(_))));
    let g = cyclic(4);
    let f = Automorphism::power_map(&g, 3).unwrap();
    assert_eq!(decide_covers(&g, &f, &opts()), Err(Error::BadPrime(2)));
}

#[test]
fn cover_witness_validation_rejects_tampering() {
    let (g, f) = mat(&[3, 3], vec![vec![2, 0], vec![0, 2]]);
    let q = affine(&g, &f).unwrap();
    let mut w = cover_witness(&q, &g, &f);
    if let Witness::Cover { projection, .. } = &mut w {
        projection.swap(0, 1);
    }
    assert!(validate_cover_witness(&q, &w).is_err());
}

#[test]
fn nilpotent_reduction() {
    let g = cyclic(15);
    let v = decide_nilpotent(&g, &Automorphism::power_map(&g, 2).unwrap(), &opts()).unwrap();
    assert_eq!((v.verdict, v.method), (Verdict::SimplyConnected, Method::NilpotentReduction));

    // 17 is -1 mod 9 and 2 mod 5
    let g = cyclic(45);
    let f = Automorphism::power_map(&g, 17).unwrap();
    assert_eq!(decide_nilpotent(&g, &f, &opts()).unwrap().verdict, Verdict::SimplyConnected);

    let (g, f) = mat(&[3, 3, 5], vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
    let v = decide_nilpotent(&g, &f, &opts()).unwrap();
    assert_eq!(v.verdict, Verdict::Not);
    let Some(Witness::Component { prime, size, verdict }) = v.witness else { panic!() };
    assert_eq!((prime, size, verdict.verdict), (3, 9, Verdict::Not));

    // the component product is isomorphic to the input
    let q = principal(&g, &f).unwrap();
    let (comps, iso) = p_components(&g, &f).unwrap();
    let prod = direct_product(&comps[0].quandle, &comps[1].quandle).unwrap();
    assert!(q.is_hom_to(&prod, &iso).is_none());

    let one = cyclic(1);
    let v = decide_nilpotent(&one, &Automorphism::identity(1), &opts()).unwrap();
    assert_eq!(v.verdict, Verdict::SimplyConnected);

    let s3 = metacyclic(3, 2, 2).unwrap();
    assert_eq!(decide_nilpotent(&s3, &Automorphism::identity(6), &opts()), Err(Error::NotNilpotent));
}

#[test]
fn family_lists() {
    let count = |t: FamilyTable, p: u64, fam: &str| {
        families::members(t, p).unwrap().iter().filter(|m| m.family == fam).count()
    };
    for (p, d, g, h) in [(3, 1, 1, 3), (5, 6, 3, 10)] {
        assert_eq!(count(FamilyTable::AffineP2, p, "D"), d);
        assert_eq!(count(FamilyTable::AffineP2, p, "G"), g);
        assert_eq!(count(FamilyTable::AffineP2, p, "H"), h);
    }
    let d3 = families::affine_p2(3).unwrap().into_iter().find(|m| m.family == "D").unwrap();
    assert_eq!((d3.params, d3.predicted), (vec![2, 2], false));
    let h5 = families::affine_p2(5).unwrap();
    let pred = |b0: u64, b1: u64| h5.iter().find(|m| m.family == "H" && m.params == [b0, b1]).unwrap().predicted;
    assert!(!pred(1, 1));
    assert!(pred(2, 1));
    assert_eq!(count(FamilyTable::CyclicP2, 5, "cyclic"), 15);
    // no c with c³ = 1 other than 1 modulo 5
    assert!(families::nonaffine_faithful(5).unwrap().iter().all(|m| m.predicted));
    assert_eq!(count(FamilyTable::Nonfaithful, 5, "Dt"), 1);
    assert!(families::nonfaithful(3).is_err());
    assert!(families::affine_p2(4).is_err());
    // every listed quandle is connected, and the non-faithful list really is non-faithful
    for t in FamilyTable::P3 {
        for m in families::members(t, 5).unwrap() {
            let q = m.spec.build().unwrap();
            assert!(q.is_connected(), "{:?} {} {:?}", t, m.family, m.params);
            assert_eq!(q.flags().is_faithful, t != FamilyTable::Nonfaithful, "{} {:?}", m.family, m.params);
        }
    }
}

#[test]
fn classify_size_p2() {
    for p in [3, 5] {
        let rows = classify_p2(p, true, &opts()).unwrap();
        for r in &rows {
            assert!(r.agree, "{r:?}");
            assert_eq!(r.covers, Some(r.computed));
        }
    }
    assert_eq!(classify_p2(11, false, &opts()), Err(Error::BadPrime(11)));
}

#[test]
fn classify_size_p3_stratified() {
    let rows = classify_p3(5, &FamilyTable::P3, false, &opts()).unwrap();
    assert!(rows.iter().all(|r| r.agree), "{rows:?}");
    let find = |t: FamilyTable, f: &str, v: Verdict| rows.iter().find(|r| r.table == t && r.family == f && r.predicted == v);
    let d = find(FamilyTable::AffineZp2Zp, "D", Verdict::Not).unwrap();
    assert_eq!(d.params[0] * d.params[1] % 5, 1);
    assert!(find(FamilyTable::AffineElem, "H3", Verdict::SimplyConnected).is_some());
    assert!(find(FamilyTable::NonaffineFaithful, "Gt", Verdict::Not).is_none());
    assert_eq!(classify_p3(3, &FamilyTable::P3, false, &opts()), Err(Error::BadPrime(3)));
}

#[test]
fn cores_and_involutory() {
    let z15 = cyclic(15);
    assert_eq!(decide_core(&z15).verdict, Verdict::SimplyConnected);
    let mc = metacyclic(7, 3, 2).unwrap();
    assert_eq!(decide_core(&mc).verdict, Verdict::Not);
    assert_eq!(decide_core(&cyclic(4)).verdict, Verdict::Not);
    for g in [z15, mc, cyclic(4), abelian(&[3, 3]).0] {
        assert_eq!(decide_core(&g).verdict, decide_core_computed(&g, &opts()).unwrap().verdict);
    }

    let v = decide_involutory_nilpotent_latin(&core(&cyclic(9)).unwrap(), &opts()).unwrap();
    assert_eq!(v.verdict, Verdict::SimplyConnected);
    let v = decide_involutory_nilpotent_latin(&core(&abelian(&[3, 3]).0).unwrap(), &opts()).unwrap();
    assert_eq!(v.verdict, Verdict::Not);
    let he = build_order_p3_group(P3Kind::Heisenberg, 3).unwrap();
    let v = decide_involutory_nilpotent_latin(&core(&he.table).unwrap(), &opts()).unwrap();
    assert_eq!(v.verdict, Verdict::Not);
    match decide_involutory_nilpotent_latin(&aff_cyclic(5, 2), &opts()) {
        Err(Error::PreconditionFailed(m)) => assert!(m.contains("involutory")),
        r => panic!("{r:?}"),
    }
}

#[test]
fn quotient_consequences() {
    let q = aff(&[5, 5], vec![vec![2, 0], vec![0, 2]]);
    // cosets of the first coordinate axis
    let alpha = congruence_generated(&q, &[(0, 5)]);
    assert_eq!(alpha.class_count(), 5);
    let rep = quotient_checks(&q, &alpha, &opts()).unwrap();
    assert_eq!(rep.quotient_verdict, Verdict::SimplyConnected);
    assert_eq!((rep.orbits_match, rep.groups_match, rep.factor_simply), (Some(true), Some(true), Some(true)));
    assert!(rep.violations.is_empty());

    // a non-simply-connected quotient reports nothing to check
    let he = build_order_p3_group(P3Kind::Heisenberg, 5).unwrap();
    let f = table2_table3_automorphism(&he, &HeisenbergAuto::Dtilde(2, 3)).unwrap();
    let q = principal(&he.table, &f).unwrap();
    let rep = quotient_checks(&q, &cayley_kernel(&q), &opts()).unwrap();
    assert_eq!((rep.quotient_size, rep.quotient_verdict, rep.orbits_match), (25, Verdict::Not, None));

    assert!(lower_central_stable(&core(&cyclic(9)).unwrap(), 1 << 20).unwrap());
    let full = Partition::full(25);
    let q = aff(&[5, 5], vec![vec![2, 0], vec![0, 3]]);
    let rep = quotient_checks(&q, &full, &opts()).unwrap();
    assert_eq!(rep.quotient_verdict, Verdict::SimplyConnected);
    assert_eq!(rep.factor_simply, None);
}

#[test]
fn rows_sort_deterministically() {
    let mut rows = classify_p2(3, false, &opts()).unwrap();
    let orig = rows.clone();
    rows.reverse();
    sort_rows(&mut rows);
    let mut again = orig.clone();
    sort_rows(&mut again);
    assert_eq!(rows, again);
}
