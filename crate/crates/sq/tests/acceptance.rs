//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria whose published closed forms are defective print FAIL and then
//! assert that every disagreement lies in the documented defect class, so the
//! test itself passes as long as nothing else goes wrong.
//!
//! Run with `cargo test -p sq --test acceptance -- --test-threads 1` to see
//! the lines in criterion order.

use std::io::Write;
use std::time::{Duration, Instant};

use sq_core::catalog::{build_order_p3_group, P3Kind, VerifyMode, DEFAULT_SEED};
use sq_core::cocycle::{is_trivial_latin, split_cocycle, SplitTarget};
use sq_core::construct::{core, direct_product, p_components, principal};
use sq_core::families::{self, FamilyTable};
use sq_core::group::{abelian, cyclic, metacyclic, Automorphism, GroupTable};
use sq_core::simply::{
    classify_p2, classify_p3, decide_core, decide_core_computed, decide_covers, decide_h2, decide_nilpotent,
    group_and_auto, validate_cover_witness, ClassificationRow, DecideOptions, Verdict, Witness,
};
use sq::suite::{run_suites, verify_appendix, SuiteConfig};

fn opts() -> DecideOptions {
    DecideOptions::default()
}

fn line(n: u32, name: &str, pass: bool, detail: &str, took: Duration) {
    let status = if pass { "PASS" } else { "FAIL" };
    // straight to the handle so the line shows up without --nocapture
    let msg = format!("criterion {n} {name}: {status} ({detail}; {:.1}s)\n", took.as_secs_f64());
    std::io::stderr().write_all(msg.as_bytes()).unwrap();
}

fn count(rows: &[ClassificationRow], table: FamilyTable, family: &str) -> usize {
    rows.iter().filter(|r| r.table == table && r.family == family).count()
}

#[test]
fn criterion_1_size_p2_closed_forms() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for (p, d, g, h) in [(3u64, 1usize, 1usize, 3usize), (5, 6, 3, 10)] {
        let rows = classify_p2(p, false, &opts()).unwrap();
        let shape = [
            count(&rows, FamilyTable::AffineP2, "D"),
            count(&rows, FamilyTable::AffineP2, "G"),
            count(&rows, FamilyTable::AffineP2, "H"),
        ];
        let cyclic_rows = count(&rows, FamilyTable::CyclicP2, "cyclic");
        let agree = rows.iter().filter(|r| r.agree).count();
        pass &= shape == [d, g, h] && agree == rows.len() && cyclic_rows == (p * p - p * 2) as usize;
        detail.push(format!("p={p}: D/G/H rows {shape:?}, {cyclic_rows} cyclic, {agree}/{} agree", rows.len()));
    }
    line(1, "size p2 closed forms", pass, &detail.join(", "), start.elapsed());
    assert!(pass);
}

#[test]
fn criterion_2_covers_match_h2_at_size_p2() {
    let start = Instant::now();
    let mut pass = true;
    let mut checked = 0;
    let mut witnesses = 0;
    for p in [3u64, 5] {
        for m in families::affine_p2(p).unwrap() {
            let q = m.spec.build().unwrap();
            let (g, f) = group_and_auto(&m).unwrap();
            let h2 = decide_h2(&q, None, &opts()).unwrap().verdict;
            let cov = decide_covers(&g, &f, &opts()).unwrap();
            checked += 1;
            pass &= h2 == cov.verdict;
            if cov.verdict == Verdict::Not {
                let w = cov.witness.expect("a cover witness");
                let Witness::Cover { cover_size, .. } = &w else { panic!("unexpected witness {w:?}") };
                pass &= *cover_size as u64 == p * p * p && validate_cover_witness(&q, &w).is_ok();
                witnesses += 1;
            }
        }
    }
    let detail = format!("{checked} rows agree: {pass}, {witnesses} validated covers of size p^3");
    line(2, "cover search matches H2 at size p2", pass, &detail, start.elapsed());
    assert!(pass);
}

/// `G(b,c)` over `Z_p³` with `bc = 1 mod p`: the printed closed form says
/// simply connected, but a cover exists.
fn in_gbc_defect(r: &ClassificationRow, p: u64) -> bool {
    r.table == FamilyTable::AffineElem
        && r.family == "G"
        && r.params[0] * r.params[1] % p == 1
        && r.predicted == Verdict::SimplyConnected
        && r.computed == Verdict::Not
}

#[test]
fn criterion_3_size_p3_classification() {
    let start = Instant::now();
    let strat = classify_p3(5, &FamilyTable::P3, false, &opts()).unwrap();
    let strat_ok = strat.iter().all(|r| r.agree);
    let strat_time = start.elapsed();
    let full = classify_p3(5, &FamilyTable::P3, true, &opts()).unwrap();
    let bad: Vec<&ClassificationRow> = full.iter().filter(|r| !r.agree).collect();
    let detail = format!(
        "stratified {}/{} agree in {:.1}s; full run {} rows, {} disagree: {:?}",
        strat.iter().filter(|r| r.agree).count(),
        strat.len(),
        strat_time.as_secs_f64(),
        full.len(),
        bad.len(),
        bad.iter().map(|r| format!("{} {:?}", r.family, r.params)).collect::<Vec<_>>()
    );
    line(3, "size p3 classification at p=5", strat_ok && bad.is_empty(), &detail, start.elapsed());
    assert!(strat_ok);
    assert!(bad.iter().all(|r| in_gbc_defect(r, 5)), "disagreement outside the G(b,c) class");
    // every bc = 1 row predicted simply connected is caught
    let class = full.iter().filter(|r| {
        r.table == FamilyTable::AffineElem && r.family == "G" && r.params[0] * r.params[1] % 5 == 1 && r.predicted == Verdict::SimplyConnected
    });
    assert!(class.clone().all(|r| !r.agree));
    assert_eq!(bad.len(), class.count());
}

#[test]
fn criterion_4_catalog_families() {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut known = 0;
    let mut good_outside = Vec::new();
    let mut checked = 0;
    for p in [5u64, 7] {
        let mode = VerifyMode::Auto { threshold: 1_000_000, samples: 100_000, seed: DEFAULT_SEED };
        for f in verify_appendix(p, mode, 1).unwrap() {
            let r = &f.report;
            checked += r.tuples_checked;
            mismatches += r.mismatch_count;
            known += f.known_defects;
            if ![3, 7, 12, 13].contains(&r.group_id) && r.good_tuples > 0 {
                good_outside.push((r.group_id, p));
            }
            if r.group_id == 3 || r.group_id == 7 {
                assert!(r.good_tuples > 0 && r.mismatch_count == 0, "G{} p={p}", r.group_id);
            }
        }
    }
    let detail = format!(
        "{checked} tuples, {mismatches} mismatches ({known} in the G12/G13 defect classes), good tuples outside 3/7/12/13: {good_outside:?}"
    );
    line(4, "catalog closed forms and group list", mismatches == 0 && good_outside.is_empty(), &detail, start.elapsed());
    assert_eq!(known, mismatches, "mismatch outside the documented classes");
    assert!(good_outside.is_empty());
}

fn core_groups() -> Vec<(String, GroupTable)> {
    let mut out: Vec<(String, GroupTable)> = (3..=125u64).step_by(2).map(|n| (format!("Z{n}"), cyclic(n))).collect();
    for moduli in [vec![3u64, 3], vec![3, 3, 3], vec![3, 3, 3, 3], vec![5, 5], vec![5, 5, 5], vec![7, 7], vec![9, 3]] {
        out.push((format!("{moduli:?}"), abelian(&moduli).0));
    }
    out.push(("Heis(3)".into(), build_order_p3_group(P3Kind::Heisenberg, 3).unwrap().table));
    out.push(("Heis(5)".into(), build_order_p3_group(P3Kind::Heisenberg, 5).unwrap().table));
    out.push(("Mod(5)".into(), build_order_p3_group(P3Kind::Modular, 5).unwrap().table));
    out.push(("Z7:Z3".into(), metacyclic(7, 3, 2).unwrap()));
    out
}

/// Whether the cocycle of the identity map into `Core(G)` is trivial.
fn identity_split_trivial(g: &GroupTable) -> bool {
    let q = core(g).unwrap();
    let rho: Vec<usize> = (0..g.order()).collect();
    let theta = split_cocycle(&q, g, &rho, &SplitTarget::Core).unwrap();
    is_trivial_latin(&q, &theta, 0).unwrap()
}

#[test]
fn criterion_5_cores() {
    let start = Instant::now();
    let mut pass = true;
    let mut wrong = Vec::new();
    let groups = core_groups();
    for (name, g) in &groups {
        let closed = decide_core(g).verdict;
        let computed = decide_core_computed(g, &opts()).unwrap().verdict;
        // cyclic of odd order is the expected answer
        let cyclic_odd = (0..g.order()).any(|x| g.element_order(x) == g.order());
        if closed != computed || closed != Verdict::from_bool(cyclic_odd) {
            pass = false;
            wrong.push(format!("{name}: closed {closed:?}, computed {computed:?}"));
        }
    }
    let mc = metacyclic(7, 3, 2).unwrap();
    let he = build_order_p3_group(P3Kind::Heisenberg, 3).unwrap().table;
    let theta = [identity_split_trivial(&mc), identity_split_trivial(&he), identity_split_trivial(&cyclic(15))];
    pass &= theta == [false, false, true];
    let detail = format!(
        "{} groups, disagreements {wrong:?}; identity cocycle trivial on Z7:Z3/Heis(3)/Z15: {theta:?}",
        groups.len()
    );
    line(5, "cores", pass, &detail, start.elapsed());
    assert!(pass);
}

/// Verdict from the Sylow components, each decided by `H²` at its own prime,
/// and whether the reported map onto their product is an isomorphism.
fn componentwise(g: &GroupTable, f: &Automorphism) -> (Verdict, bool) {
    let (comps, iso) = p_components(g, f).unwrap();
    let mut all = true;
    for c in &comps {
        all &= decide_h2(&c.quandle, Some(&[c.prime]), &opts()).unwrap().verdict == Verdict::SimplyConnected;
    }
    let mut prod = comps[0].quandle.clone();
    for c in &comps[1..] {
        prod = direct_product(&prod, &c.quandle).unwrap();
    }
    let q = principal(g, f).unwrap();
    let mut hit = vec![false; prod.size()];
    iso.iter().for_each(|&y| hit[y] = true);
    let bijective = iso.len() == prod.size() && hit.iter().all(|&h| h);
    (Verdict::from_bool(all), bijective && q.is_hom_to(&prod, &iso).is_none())
}

#[test]
fn criterion_6_nilpotent_reduction() {
    let start = Instant::now();
    let (g3, c3) = abelian(&[3, 3, 5]);
    let cases: Vec<(&str, GroupTable, Automorphism, Verdict)> = vec![
        ("Aff(Z15,2)", cyclic(15), Automorphism::power_map(&cyclic(15), 2).unwrap(), Verdict::SimplyConnected),
        // 17 is -1 mod 9 and 2 mod 5
        ("Aff(Z45,17)", cyclic(45), Automorphism::power_map(&cyclic(45), 17).unwrap(), Verdict::SimplyConnected),
        (
            "Aff(Z3^2xZ5,D(2,2)+2)",
            g3.clone(),
            Automorphism::new(&g3, c3.matrix_map(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]])).unwrap(),
            Verdict::Not,
        ),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, g, f, expected) in &cases {
        let v = decide_nilpotent(g, f, &opts()).unwrap();
        let (parts, iso_ok) = componentwise(g, f);
        pass &= v.verdict == *expected && parts == *expected && iso_ok;
        if *expected == Verdict::Not {
            pass &= matches!(v.witness, Some(Witness::Component { prime: 3, size: 9, .. }));
        }
        detail.push(format!("{name} {:?}", v.verdict));
    }
    line(6, "nilpotent reduction", pass, &detail.join(", "), start.elapsed());
    assert!(pass);
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    let cfg = SuiteConfig {
        appendix_primes: Vec::new(),
        only: Some(
            [
                "three_way_triviality",
                "coboundary_dimension",
                "split_cocycles",
                "qn_diagram",
                "quotient_consequences",
                "lower_central",
            ]
            .map(String::from)
            .to_vec(),
        ),
        timings: false,
        ..SuiteConfig::default()
    };
    let reports = run_suites(&cfg);
    let pass = reports.len() == 6 && reports.iter().all(|r| r.passed() && r.checked > 0);
    let detail = reports
        .iter()
        .map(|r| format!("{} {}/{}", r.name, r.checked - r.failed, r.checked))
        .collect::<Vec<_>>()
        .join(", ");
    line(7, "property suites", pass, &detail, start.elapsed());
    for r in &reports {
        assert!(r.passed(), "{}: {:?}", r.name, r.first_counterexample);
    }
}
