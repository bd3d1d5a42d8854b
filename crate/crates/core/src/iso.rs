//! Quandle isomorphism by backtracking over images of a generating sequence.

use alloc::vec;
use alloc::vec::Vec;

use crate::quandle::QuandleTable;

/// How a point is obtained from earlier ones.
#[derive(Clone, Copy, Debug)]
enum Step {
    Gen,
    Star(usize, usize),
    Ldiv(usize, usize),
}

/// Generating sequence and, for every point, the recipe that produces it.
struct Recipe {
    gens: Vec<usize>,
    /// Points grouped by the generator after which they appear.
    segments: Vec<Vec<(usize, Step)>>,
}

fn recipe(q: &QuandleTable) -> Recipe {
    let n = q.size();
    let mut inside = vec![false; n];
    let mut order: Vec<usize> = Vec::new();
    let mut gens = Vec::new();
    let mut segments = Vec::new();
    while order.len() < n {
        let g = (0..n).find(|&x| !inside[x]).unwrap();
        gens.push(g);
        let mut seg = vec![(g, Step::Gen)];
        inside[g] = true;
        order.push(g);
        // closure with recorded derivations
        let mut i = 0;
        while i < order.len() {
            let a = order[i];
            for j in 0..=i {
                let b = order[j];
                for (v, s) in [
                    (q.op(a, b), Step::Star(a, b)),
                    (q.op(b, a), Step::Star(b, a)),
                    (q.ldiv(a, b), Step::Ldiv(a, b)),
                    (q.ldiv(b, a), Step::Ldiv(b, a)),
                ] {
                    if !inside[v] {
                        inside[v] = true;
                        order.push(v);
                        seg.push((v, s));
                    }
                }
            }
            i += 1;
        }
        segments.push(seg);
    }
    Recipe { gens, segments }
}

/// Cheap per-point invariant: cycle type of `L_x` and the number of `y` with `y*x = x`.
fn point_invariant(q: &QuandleTable, x: usize) -> Vec<usize> {
    let mut v = q.left(x).cycle_type();
    v.push((0..q.size()).filter(|&y| q.op(y, x) == x).count());
    v
}

fn profile(q: &QuandleTable) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = (0..q.size()).map(|x| point_invariant(q, x)).collect();
    v.sort();
    v
}

/// An isomorphism `a → b` as a point map, if one exists.
pub fn quandle_isomorphic(a: &QuandleTable, b: &QuandleTable) -> Option<Vec<usize>> {
    let n = a.size();
    if n != b.size() || a.flags() != b.flags() {
        return None;
    }
    if profile(a) != profile(b) {
        return None;
    }
    let inv_b: Vec<Vec<usize>> = (0..n).map(|x| point_invariant(b, x)).collect();
    let inv_a: Vec<Vec<usize>> = (0..n).map(|x| point_invariant(a, x)).collect();
    let r = recipe(a);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // translations act transitively on a connected target, so the first
    // generator can be sent to a fixed point
    let first_candidates: Vec<usize> = if b.is_connected() {
        (0..n).filter(|&y| inv_b[y] == inv_a[r.gens[0]]).take(1).collect()
    } else {
        (0..n).filter(|&y| inv_b[y] == inv_a[r.gens[0]]).collect()
    };
    let mut found = None;
    search(a, b, &r, 0, &first_candidates, &inv_a, &inv_b, &mut map, &mut used, &mut found);
    found
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &QuandleTable,
    b: &QuandleTable,
    r: &Recipe,
    depth: usize,
    first: &[usize],
    inv_a: &[Vec<usize>],
    inv_b: &[Vec<usize>],
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Option<Vec<usize>>,
) {
    if depth == r.gens.len() {
        if a.is_hom_to(b, map).is_none() {
            *found = Some(map.clone());
        }
        return;
    }
    let g = r.gens[depth];
    let cands: Vec<usize> = if depth == 0 {
        first.to_vec()
    } else {
        (0..a.size()).filter(|&y| !used[y] && inv_b[y] == inv_a[g]).collect()
    };
    for c in cands {
        let mut assigned = Vec::new();
        let mut ok = true;
        for &(x, step) in &r.segments[depth] {
            let y = match step {
                Step::Gen => c,
                Step::Star(u, v) => b.op(map[u], map[v]),
                Step::Ldiv(u, v) => b.ldiv(map[u], map[v]),
            };
            if used[y] || inv_b[y] != inv_a[x] {
                ok = false;
                break;
            }
            map[x] = y;
            used[y] = true;
            assigned.push(x);
        }
        // the points mapped so far form a subquandle; check it is preserved
        if ok {
            let done: Vec<usize> = r.segments[..=depth].iter().flatten().map(|&(x, _)| x).collect();
            ok = done.iter().all(|&x| done.iter().all(|&y| map[a.op(x, y)] == b.op(map[x], map[y])));
        }
        if ok {
            search(a, b, r, depth + 1, first, inv_a, inv_b, map, used, found);
        }
        for x in assigned {
            used[map[x]] = false;
            map[x] = usize::MAX;
        }
        if found.is_some() {
            return;
        }
    }
}

