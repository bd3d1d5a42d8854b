use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sq_core::catalog::{build_order_p3_group, P3Kind};
use sq_core::cocycle::*;
use sq_core::cohomology::*;
use sq_core::construct::{affine, conj_f, core, direct_product, projection};
use sq_core::corpus::small_quandles;
use sq_core::group::{abelian, cyclic, metacyclic, Automorphism, GroupTable};
use sq_core::partition::Partition;
use sq_core::quandle::*;
use sq_core::Error;

fn aff(moduli: &[u64], m: &[&[i64]]) -> QuandleTable {
    let (g, c) = abelian(moduli);
    let rows: Vec<Vec<i64>> = m.iter().map(|r| r.to_vec()).collect();
    affine(&g, &Automorphism::new(&g, c.matrix_map(&rows)).unwrap()).unwrap()
}

fn aff_cyclic(n: u64, k: i64) -> QuandleTable {
    aff(&[n], &[&[k]])
}

fn minus_one_z3sq() -> QuandleTable {
    aff(&[3, 3], &[&[2, 0], &[0, 2]])
}

fn random_gamma(n: usize, m: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..n).map(|_| rng.random_range(0..m)).collect()
}

fn identity_split(g: &GroupTable) -> (QuandleTable, GroupCocycle) {
    let q = core(g).unwrap();
    let rho: Vec<usize> = (0..g.order()).collect();
    let t = split_cocycle(&q, g, &rho, &SplitTarget::Core).unwrap();
    (q, t)
}

#[test]
fn validation() {
    let q = aff_cyclic(5, 2);
    let zero = vec![vec![0u64; 5]; 5];
    assert!(AbelianCocycle::new(&q, 5, &zero).unwrap().is_zero());
    // identity morphism into the affine quandle itself
    let split: Vec<Vec<u64>> = (0..5u64).map(|x| (0..5u64).map(|y| (x + 5 - y) % 5).collect()).collect();
    AbelianCocycle::new(&q, 5, &split).unwrap();
    let mut bad = split.clone();
    bad[1][2] = (bad[1][2] + 1) % 5;
    assert!(matches!(AbelianCocycle::new(&q, 5, &bad), Err(Error::CCViolation(..))));
    let mut diag = zero.clone();
    diag[3][3] = 1;
    assert!(matches!(AbelianCocycle::new(&q, 5, &diag), Err(Error::QCViolation(3))));
    assert!(AbelianCocycle::new(&q, 5, &zero[..4]).is_err());
    let big = cyclic(700);
    assert!(matches!(GroupCocycle::new(&q, big, &vec![vec![0; 5]; 5]), Err(Error::TooLarge(700, 625))));
}

#[test]
fn extensions() {
    let q = minus_one_z3sq();
    let (e, fibers) = abelian_extension(&q, &AbelianCocycle::zero(9, 3)).unwrap();
    assert_eq!(e, direct_product(&q, &projection(3).unwrap()).unwrap());
    assert_eq!(fibers.class_count(), 9);
    let labels: Vec<usize> = (0..27).map(|i| i / 3).collect();
    assert!(e.is_hom_to(&q, &labels).is_none());
    let space = cocycle_space(&q, 3).unwrap();
    let witness = &space.h2_basis[0];
    let (e, _) = abelian_extension(&q, witness).unwrap();
    assert_eq!(e.size(), 27);
    assert!(e.is_connected());
    assert!(e.is_hom_to(&q, &labels).is_none());
    let one = projection(1).unwrap();
    let (e, _) = abelian_extension(&one, &AbelianCocycle::zero(1, 5)).unwrap();
    assert_eq!(e, projection(5).unwrap());
}

#[test]
fn orbit_criterion_and_trivialization() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let q = minus_one_z3sq();
    let zero = AbelianCocycle::zero(9, 3).to_group_cocycle();
    assert!(is_trivial_via_orbit(&q, &zero).unwrap());
    assert_eq!(trivialize(&q, &zero).unwrap().unwrap(), vec![0; 9]);
    let witness = cocycle_space(&q, 3).unwrap().h2_basis[0].to_group_cocycle();
    assert!(!is_trivial_via_orbit(&q, &witness).unwrap());
    assert!(trivialize(&q, &witness).unwrap().is_none());
    for _ in 0..20 {
        let g0 = random_gamma(9, 3, &mut rng);
        let d = AbelianCocycle::coboundary(&q, 3, &g0);
        AbelianCocycle::from_flat(&q, 3, d.entries().to_vec()).unwrap();
        let gd = d.to_group_cocycle();
        assert!(is_trivial_via_orbit(&q, &gd).unwrap());
        let gamma = trivialize(&q, &gd).unwrap().unwrap();
        let back = AbelianCocycle::coboundary(&q, 3, &gamma.iter().map(|&v| v as u64).collect::<Vec<_>>());
        assert_eq!(back, d);
        assert!(is_coboundary_by_elimination(&q, &d));
    }
    assert!(!is_coboundary_by_elimination(&q, &cocycle_space(&q, 3).unwrap().h2_basis[0]));
    assert!(matches!(is_trivial_via_orbit(&projection(2).unwrap(), &zero), Err(Error::NotConnected)));
}

#[test]
fn normalization() {
    let (q5, t5) = identity_split(&cyclic(5));
    let n5 = u_normalize(&q5, &t5, 0).unwrap();
    assert!(n5.is_trivial_entrywise());
    assert!(u_normalize(&q5, &n5, 0).unwrap().rows() == n5.rows());
    let (q21, t21) = identity_split(&metacyclic(7, 3, 2).unwrap());
    assert!(q21.flags().is_latin);
    assert!(!u_normalize(&q21, &t21, 0).unwrap().is_trivial_entrywise());
    let (q15, t15) = identity_split(&cyclic(15));
    assert!(is_trivial_latin(&q15, &t15, 0).unwrap());
    let he = build_order_p3_group(P3Kind::Heisenberg, 3).unwrap();
    let (q27, t27) = identity_split(&he.table);
    assert!(q27.flags().is_latin);
    assert!(!is_trivial_latin(&q27, &t27, 0).unwrap());
    // the other methods agree
    assert!(!is_trivial_via_orbit(&q27, &t27).unwrap());
    assert!(trivialize(&q27, &t27).unwrap().is_none());
    assert!(is_trivial_via_orbit(&q15, &t15).unwrap());
    // coboundaries normalize to the identity
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let gamma: Vec<usize> = (0..27).map(|_| rng.random_range(0..27)).collect();
        let d = GroupCocycle::coboundary(&q27, he.table.clone(), &gamma);
        assert!(is_trivial_latin(&q27, &d, 5).unwrap());
        for u in [0, 7] {
            let nd = u_normalize(&q27, &t27, u).unwrap();
            assert!((0..27).all(|x| nd.get(x, u) == 0));
        }
    }
    assert!(matches!(u_normalize(&aff_cyclic(9, 4), &AbelianCocycle::zero(9, 3).to_group_cocycle(), 0), Err(Error::NotLatin)));
}

#[test]
fn spaces_and_dimensions() {
    let s = cocycle_space(&projection(1).unwrap(), 3).unwrap();
    assert_eq!((s.dim_z2, s.dim_b2), (0, 0));
    let s = cocycle_space(&aff_cyclic(3, 2), 3).unwrap();
    assert_eq!((s.dim_z2, s.dim_b2), (2, 2));
    let s = cocycle_space(&minus_one_z3sq(), 3).unwrap();
    assert!(s.dim_h2() >= 1);
    assert_eq!(h2_dim(&aff_cyclic(9, 2), 3).unwrap(), 0);
    assert!(h2_dim(&aff(&[5, 5], &[&[2, 0], &[0, 3]]), 5).unwrap() >= 1);
    assert_eq!(h2_dim(&aff(&[5, 5], &[&[2, 0], &[0, 2]]), 5).unwrap(), 0);
    assert!(matches!(h2_dim(&projection(3).unwrap(), 3), Err(Error::NotConnected)));
    assert!(matches!(cocycle_space(&aff_cyclic(3, 2), 4), Err(Error::BadParams(_))));
}

#[test]
fn solvers_agree_on_corpus() {
    for e in small_quandles(20) {
        let q = &e.quandle;
        let moduli: &[u64] = if q.size() <= 12 { &[2, 3, 5] } else { &[3] };
        for &m in moduli {
            let dense = cocycle_space_with(q, m, SolverOptions { force: Some(SolverKind::Dense), ..Default::default() }).unwrap();
            let par =
                cocycle_space_with(q, m, SolverOptions { force: Some(SolverKind::Parametrized), ..Default::default() }).unwrap();
            assert_eq!(dense.dim_z2, par.dim_z2, "{} mod {m}", e.name);
            assert_eq!(dense.dim_h2(), par.h2_basis.len(), "{} mod {m}", e.name);
            for t in par.basis.iter().chain(&dense.basis) {
                AbelianCocycle::from_flat(q, m, t.entries().to_vec()).unwrap();
            }
        }
    }
}

#[test]
fn parametrized_solver_on_larger_quandles() {
    // size 27 and 81 quandles, checked exhaustively
    for (q, m, h) in [
        (aff(&[3, 3, 3], &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]), 3u64, None),
        (aff_cyclic(27, 2), 3, Some(0)),
        (aff(&[9, 9], &[&[2, 0], &[0, 2]]), 3, None),
    ] {
        let s = cocycle_space(&q, m).unwrap();
        assert_eq!(s.solver, SolverKind::Parametrized);
        assert_eq!(s.dim_b2, q.size() - 1);
        if let Some(h) = h {
            assert_eq!(s.dim_h2(), h);
        }
        for t in &s.basis {
            AbelianCocycle::from_flat(&q, m, t.entries().to_vec()).unwrap();
        }
        for w in &s.h2_basis {
            let g = w.to_group_cocycle();
            assert!(!is_trivial_via_orbit(&q, &g).unwrap());
        }
    }
}

#[test]
fn coboundaries_have_constant_kernel() {
    // δγ = 0 forces γ constant on LMlt orbits
    for e in small_quandles(12) {
        let q = &e.quandle;
        let n = q.size();
        let m = 3;
        let mut rows = vec![vec![0u64; n]; n * n];
        for x in 0..n {
            for y in 0..n {
                let r = &mut rows[x * n + y];
                r[q.op(x, y)] = (r[q.op(x, y)] + 1) % m;
                r[y] = (r[y] + m - 1) % m;
            }
        }
        let ker = sq_core::linalg::kernel(&rows, n, m);
        assert_eq!(ker.len(), lmlt_orbits(q).class_count(), "{}", e.name);
        let s = cocycle_space(q, m).unwrap();
        assert_eq!(s.dim_b2, n - ker.len());
    }
}

#[test]
fn three_methods_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for e in small_quandles(27).into_iter().filter(|e| e.quandle.is_connected()) {
        let q = &e.quandle;
        for m in [2u64, 3] {
            let s = cocycle_space(q, m).unwrap();
            let mut cands: Vec<AbelianCocycle> = s.basis.clone();
            // random combinations
            for _ in 0..3 {
                let mut c = AbelianCocycle::zero(q.size(), m);
                for b in &s.basis {
                    c = c.add_scaled(b, rng.random_range(0..m));
                }
                cands.push(c);
            }
            for c in &cands {
                let g = c.to_group_cocycle();
                let orbit = is_trivial_via_orbit(q, &g).unwrap();
                let theta = trivialize(q, &g).unwrap().is_some();
                let elim = is_coboundary_by_elimination(q, c);
                assert_eq!(orbit, theta, "{}", e.name);
                assert_eq!(orbit, elim, "{}", e.name);
                let sizes = extension_orbits(q, &g).class_sizes();
                assert!(sizes.iter().all(|&k| k % q.size() == 0 && (q.size() * m as usize) % k == 0));
                if q.flags().is_latin {
                    assert_eq!(is_trivial_latin(q, &g, 0).unwrap(), orbit, "{}", e.name);
                }
                if !orbit {
                    assert!(!c.is_zero());
                }
            }
        }
    }
}

#[test]
fn split_cocycles() {
    let g = metacyclic(7, 3, 2).unwrap();
    let (q, t) = identity_split(&g);
    assert_eq!(t.get(3, 5), g.mul(3, g.inv(5)));
    let constant = split_cocycle(&q, &g, &vec![4; 21], &SplitTarget::Core).unwrap();
    assert!(constant.is_trivial_entrywise());
    let f = Automorphism::inner(&g, 2);
    let tq = conj_f(&g, &f).unwrap();
    split_cocycle(&tq, &g, &(0..21).collect::<Vec<_>>(), &SplitTarget::Twisted(f.clone())).unwrap();
    let mut bad: Vec<usize> = (0..21).collect();
    bad.swap(1, 2);
    assert!(matches!(split_cocycle(&q, &g, &bad, &SplitTarget::Core), Err(Error::NotMorphism(..))));
    // x ↦ L_[x] into the conjugation quandle of LMlt(Q/α)
    let q = core(&cyclic(9)).unwrap();
    let alpha = Partition::from_labels(&(0..9).map(|x| x % 3).collect::<Vec<_>>());
    let (quot, class) = quotient_quandle(&q, &alpha).unwrap();
    let l = lmlt(&quot, 1000).unwrap();
    let lg = l.to_group_table().unwrap();
    let rho: Vec<usize> = (0..9).map(|x| l.index_of(&quot.left(class[x]).0).unwrap()).collect();
    let t = split_cocycle(&q, &lg, &rho, &SplitTarget::Twisted(Automorphism::identity(lg.order()))).unwrap();
    assert_eq!(t.size(), 9);
}

#[test]
fn fiber_congruences() {
    let q = minus_one_z3sq();
    let w = cocycle_space(&q, 3).unwrap().h2_basis[0].clone();
    let (e, ker) = abelian_extension(&q, &w).unwrap();
    assert_eq!(fiber_congruence(9, 3, 1), ker);
    assert!(fiber_congruence(9, 3, 0).is_discrete());
    for a in 0..3 {
        for b in 0..3 {
            if a != b {
                let c = congruence_generated(&e, &[(a, b)]);
                assert_eq!(c, ker);
            }
        }
    }
    for step in 0..3 {
        check_congruence(&e, &fiber_congruence(9, 3, step)).unwrap();
    }
    let (e4, _) = abelian_extension(&aff_cyclic(3, 2), &AbelianCocycle::zero(3, 9)).unwrap();
    check_congruence(&e4, &fiber_congruence(3, 9, 3)).unwrap();
    assert_eq!(fiber_congruence(3, 9, 3).class_count(), 9);
}
