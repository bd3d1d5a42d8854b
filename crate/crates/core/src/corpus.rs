//! A deterministic collection of small quandles used by property checks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::{build_order_p3_group, table2_table3_automorphism, HeisenbergAuto, P3Kind};
use crate::construct::{affine, conj, core, coset_quandle, direct_product, principal, projection};
use crate::group::{abelian, center, cyclic, metacyclic, Automorphism};
use crate::perm::{Perm, PermGroup};
use crate::quandle::{subquandle_generated, subquandle_table, QuandleTable};

pub struct CorpusEntry {
    pub name: String,
    pub quandle: QuandleTable,
}

fn push(out: &mut Vec<CorpusEntry>, max: usize, name: String, q: crate::Result<QuandleTable>) {
    if let Ok(q) = q {
        if q.size() <= max {
            out.push(CorpusEntry { name, quandle: q });
        }
    }
}

fn matrix_affine(moduli: &[u64], rows: &[Vec<i64>]) -> crate::Result<QuandleTable> {
    let (g, c) = abelian(moduli);
    affine(&g, &Automorphism::new(&g, c.matrix_map(rows))?)
}

/// Quandles of size at most `max`: affine, cores, conjugation classes,
/// principal and coset quandles over Heisenberg groups, and a few products.
pub fn small_quandles(max: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=max.min(27) as u64 {
        let g = cyclic(n);
        for k in 1..n.max(2) as i64 {
            if let Ok(f) = Automorphism::power_map(&g, k) {
                push(&mut out, max, format!("aff(Z{n},{k})"), affine(&g, &f));
            }
        }
    }
    for (m, rows, tag) in [
        (vec![3u64, 3], vec![vec![2i64, 0], vec![0, 2]], "D(2,2)"),
        (vec![3, 3], vec![vec![2, 1], vec![0, 2]], "G(2)"),
        (vec![3, 3], vec![vec![0, 1], vec![2, 0]], "H(x2+1)"),
        (vec![3, 3], vec![vec![0, 1], vec![2, 2]], "H(x2+x+2)"),
        (vec![2, 2], vec![vec![0, 1], vec![1, 1]], "H(x2+x+1)"),
        (vec![3, 3, 3], vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]], "D(2,2,2)"),
        (vec![3, 3, 3], vec![vec![2, 1, 0], vec![0, 2, 1], vec![0, 0, 2]], "F(2)"),
        (vec![9, 3], vec![vec![2, 0], vec![0, 2]], "D(2,2)"),
        (vec![9, 3], vec![vec![5, 0], vec![0, 2]], "D(5,2)"),
    ] {
        let label = m.iter().map(|x| format!("Z{x}")).collect::<Vec<_>>().join("x");
        push(&mut out, max, format!("aff({label},{tag})"), matrix_affine(&m, &rows));
    }
    for n in 2..=max.min(27) as u64 {
        push(&mut out, max, format!("core(Z{n})"), core(&cyclic(n)));
    }
    for (n, m, r) in [(3u64, 2u64, 2u64), (5, 2, 4), (7, 2, 6), (7, 3, 2), (9, 2, 8), (5, 4, 2)] {
        let g = metacyclic(n, m, r).unwrap();
        push(&mut out, max, format!("core(Z{n}:Z{m})"), core(&g));
        push(&mut out, max, format!("conj(Z{n}:Z{m})"), conj(&g));
    }
    push(&mut out, max, "core(Z2xZ2)".into(), core(&abelian(&[2, 2]).0));
    // conjugacy classes of Sym(4)
    let s4 = PermGroup::generate(4, &[Perm(vec![1, 0, 2, 3]), Perm(vec![1, 2, 3, 0])], 100).unwrap();
    let s4t = s4.to_group_table().unwrap();
    let cq = conj(&s4t).unwrap();
    for (name, ct) in [("transpositions", vec![1usize, 1, 2]), ("4-cycles", vec![4]), ("3-cycles", vec![1, 3])] {
        let seed: Vec<usize> = (0..24).filter(|&i| s4.perm(i).cycle_type() == ct).collect();
        let pts = subquandle_generated(&cq, &seed);
        push(&mut out, max, format!("conj(S4,{name})"), subquandle_table(&cq, &pts));
    }
    for p in [3u64] {
        let he = build_order_p3_group(P3Kind::Heisenberg, p).unwrap();
        for kind in [
            HeisenbergAuto::Dtilde(2, 2),
            HeisenbergAuto::Gtilde(2),
            HeisenbergAuto::Htilde { b0: 1, b1: 0 },
            HeisenbergAuto::Htilde { b0: 2, b1: 1 },
        ] {
            if let Ok(f) = table2_table3_automorphism(&he, &kind) {
                push(&mut out, max, format!("Q(Heis({p}),{kind:?})"), principal(&he.table, &f));
                let z = center(&he.table);
                if z.elements().all(|x| f.apply(x) == x) {
                    push(&mut out, max, format!("Q(Heis({p}),Z,{kind:?})"), coset_quandle(&he.table, &z, &f).map(|r| r.0));
                }
            }
        }
        push(&mut out, max, format!("core(Heis({p}))"), core(&he.table));
        push(&mut out, max, format!("conj(Heis({p}))"), conj(&he.table));
    }
    for n in 1..=4 {
        push(&mut out, max, format!("proj({n})"), projection(n));
    }
    let d3 = core(&cyclic(3)).unwrap();
    let d5 = core(&cyclic(5)).unwrap();
    push(&mut out, max, "core(Z3)xproj(2)".into(), direct_product(&d3, &projection(2).unwrap()));
    push(&mut out, max, "core(Z3)xcore(Z5)".into(), direct_product(&d3, &d5));
    push(&mut out, max, "core(Z3)xcore(Z3)".into(), direct_product(&d3, &d3));
    push(&mut out, max, "core(Z3)xcore(Z3)xcore(Z3)".into(), direct_product(&direct_product(&d3, &d3).unwrap(), &d3));
    out
}
