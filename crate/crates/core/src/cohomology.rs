//! The space `Z²(Q, Z_q)` of abelian cocycles and the dimension of `H²`.
//!
//! Two solvers are available. The dense one eliminates every (CC) equation
//! over all off-diagonal entries and is meant for small quandles. The
//! parametrized one treats the rows at a generating set `S` as unknowns and
//! derives every other row along the Schreier graph of `⟨L_s⟩`, using
//! `Θ_{s*y}∘L_s = Θ_s∘L_y + Θ_y − Θ_s`. The (CC) equations only need to be
//! imposed for `x ∈ S`: the points where they hold form a subquandle.
//! A sampled set of constraints is eliminated symbolically, then every
//! constraint is evaluated on the candidate basis, which makes the result exact.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::cocycle::AbelianCocycle;
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::quandle::{lmlt_orbits, subquandle_generated, QuandleTable};

/// Above this many unknowns the parametrized solver is used.
pub const DEFAULT_DENSE_LIMIT: usize = 156;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Dense,
    Parametrized,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub dense_limit: usize,
    /// Overrides the size-based choice.
    pub force: Option<SolverKind>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { dense_limit: DEFAULT_DENSE_LIMIT, force: None }
    }
}

#[derive(Clone, Debug)]
pub struct CocycleSpace {
    pub modulus: u64,
    pub solver: SolverKind,
    pub dim_z2: usize,
    pub dim_b2: usize,
    /// A basis of `Z²`.
    pub basis: Vec<AbelianCocycle>,
    /// Cocycles whose classes form a basis of `H²`.
    pub h2_basis: Vec<AbelianCocycle>,
}

impl CocycleSpace {
    pub fn dim_h2(&self) -> usize {
        self.dim_z2 - self.dim_b2
    }
}

pub fn cocycle_space(q: &QuandleTable, modulus: u64) -> Result<CocycleSpace> {
    cocycle_space_with(q, modulus, SolverOptions::default())
}

pub fn cocycle_space_with(q: &QuandleTable, modulus: u64, opts: SolverOptions) -> Result<CocycleSpace> {
    if !is_prime(modulus) || modulus > u32::MAX as u64 {
        return Err(Error::BadParams(alloc::format!("{modulus} is not a supported prime")));
    }
    let n = q.size();
    let kind = opts.force.unwrap_or(if n * n.saturating_sub(1) <= opts.dense_limit {
        SolverKind::Dense
    } else {
        SolverKind::Parametrized
    });
    let dim_b2 = n - lmlt_orbits(q).class_count();
    let (basis, coords): (Vec<Vec<u32>>, Box<dyn Fn(&[u32]) -> Vec<u64>>) = match kind {
        SolverKind::Dense => {
            let basis = dense_solve(q, modulus);
            let f = move |t: &[u32]| -> Vec<u64> {
                (0..n * n).filter(|i| i / n != i % n).map(|i| t[i] as u64).collect()
            };
            (basis, Box::new(f))
        }
        SolverKind::Parametrized => {
            let param = TreeParam::new(q);
            let basis = param.solve(q, modulus);
            let units = param.units.clone();
            let f = move |t: &[u32]| -> Vec<u64> {
                units.iter().flat_map(|&u| t[u * n..(u + 1) * n].iter().map(|&v| v as u64)).collect::<Vec<_>>()
            };
            (basis, Box::new(f))
        }
    };
    // classes independent modulo the coboundaries
    let ncols = coords(&vec![0u32; n * n]).len();
    let mut ech = Echelon::new(ncols, modulus);
    for z in 0..n {
        ech.insert(coords(&delta_indicator(q, z, modulus)));
    }
    debug_assert_eq!(ech.rank(), dim_b2);
    let mut h2_basis = Vec::new();
    for t in &basis {
        if ech.insert(coords(t)) {
            h2_basis.push(AbelianCocycle::from_flat_trusted(n, modulus, t.clone()));
        }
    }
    Ok(CocycleSpace {
        modulus,
        solver: kind,
        dim_z2: basis.len(),
        dim_b2,
        basis: basis.into_iter().map(|t| AbelianCocycle::from_flat_trusted(n, modulus, t)).collect(),
        h2_basis,
    })
}

/// `dim H²(Q, Z_q)` for connected `Q`.
pub fn h2_dim(q: &QuandleTable, modulus: u64) -> Result<usize> {
    h2_dim_with(q, modulus, SolverOptions::default())
}

pub fn h2_dim_with(q: &QuandleTable, modulus: u64, opts: SolverOptions) -> Result<usize> {
    if !q.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(cocycle_space_with(q, modulus, opts)?.dim_h2())
}

/// Coboundary of the indicator function of `z`.
fn delta_indicator(q: &QuandleTable, z: usize, m: u64) -> Vec<u32> {
    let n = q.size();
    let mut t = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let v = (q.op(x, y) == z) as u64 + m - (y == z) as u64;
            t[x * n + y] = (v % m) as u32;
        }
    }
    t
}

/// Membership of a cocycle in `B²` by elimination against the coboundaries of indicators.
pub fn is_coboundary_by_elimination(q: &QuandleTable, theta: &AbelianCocycle) -> bool {
    let n = q.size();
    let m = theta.modulus();
    let param = TreeParam::new(q);
    let coords = |t: &[u32]| -> Vec<u64> {
        param.units.iter().flat_map(|&u| t[u * n..(u + 1) * n].iter().map(|&v| v as u64)).collect()
    };
    let mut ech = Echelon::new(param.units.len() * n, m);
    for z in 0..n {
        ech.insert(coords(&delta_indicator(q, z, m)));
    }
    ech.contains(&coords(theta.entries()))
}

fn dense_solve(q: &QuandleTable, m: u64) -> Vec<Vec<u32>> {
    let n = q.size();
    let idx = |a: usize, b: usize| -> Option<usize> {
        if a == b {
            None
        } else {
            Some(a * (n - 1) + if b < a { b } else { b - 1 })
        }
    };
    let unknowns = n * n.saturating_sub(1);
    let mut ech = Echelon::new(unknowns, m);
    let mut seen: HashSet<Vec<(usize, u64)>> = HashSet::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut terms: Vec<(usize, u64)> = Vec::with_capacity(4);
                for (a, b, c) in [
                    (q.op(x, y), q.op(x, z), 1),
                    (x, z, 1),
                    (x, q.op(y, z), m - 1),
                    (y, z, m - 1),
                ] {
                    if let Some(i) = idx(a, b) {
                        terms.push((i, c));
                    }
                }
                terms.sort_unstable();
                let mut merged: Vec<(usize, u64)> = Vec::with_capacity(4);
                for (i, c) in terms {
                    match merged.last_mut() {
                        Some((j, d)) if *j == i => *d = (*d + c) % m,
                        _ => merged.push((i, c)),
                    }
                }
                merged.retain(|&(_, c)| c != 0);
                if merged.is_empty() || !seen.insert(merged.clone()) {
                    continue;
                }
                let mut v = vec![0u64; unknowns];
                for (i, c) in merged {
                    v[i] = c;
                }
                ech.insert(v);
            }
        }
    }
    ech.kernel()
        .into_iter()
        .map(|sol| {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    if let Some(i) = idx(a, b) {
                        t[a * n + b] = sol[i] as u32;
                    }
                }
            }
            t
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
enum Derive {
    /// `w = s*y`.
    Star(usize, usize),
    /// `w = s\y`.
    Ldiv(usize, usize),
}

/// Cocycles parametrized by the rows at `units`, all other rows derived in `order`.
struct TreeParam {
    n: usize,
    gens: Vec<usize>,
    units: Vec<usize>,
    order: Vec<(usize, Derive)>,
}

/// A small generating set, grown greedily by closure size.
pub fn small_generating_set(q: &QuandleTable) -> Vec<usize> {
    let n = q.size();
    let mut gens: Vec<usize> = Vec::new();
    let mut inside = vec![false; n];
    let mut covered = 0;
    while covered < n {
        let mut best = (0, usize::MAX, Vec::new());
        for c in (0..n).filter(|&c| !inside[c]) {
            let mut seed = gens.clone();
            seed.push(c);
            let cl = subquandle_generated(q, &seed);
            if cl.len() > best.0 {
                best = (cl.len(), c, cl);
            }
            if best.0 == n {
                break;
            }
        }
        gens.push(best.1);
        for &x in &best.2 {
            inside[x] = true;
        }
        covered = best.0;
    }
    gens
}

impl TreeParam {
    fn new(q: &QuandleTable) -> Self {
        let n = q.size();
        let gens = small_generating_set(q);
        let mut units = gens.clone();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in &gens {
            seen[s] = true;
            queue.push_back(s);
        }
        let mut order = Vec::new();
        loop {
            while let Some(y) = queue.pop_front() {
                for &s in &gens {
                    for (w, d) in [(q.op(s, y), Derive::Star(s, y)), (q.ldiv(s, y), Derive::Ldiv(s, y))] {
                        if !seen[w] {
                            seen[w] = true;
                            order.push((w, d));
                            queue.push_back(w);
                        }
                    }
                }
            }
            match (0..n).find(|&x| !seen[x]) {
                Some(r) => {
                    seen[r] = true;
                    units.push(r);
                    queue.push_back(r);
                }
                None => break,
            }
        }
        TreeParam { n, gens, units, order }
    }

    fn unknowns(&self) -> usize {
        self.units.len() * self.n
    }

    fn materialize(&self, q: &QuandleTable, v: &[u64], m: u64) -> Vec<u32> {
        let n = self.n;
        let mut t = vec![0u32; n * n];
        for (j, &u) in self.units.iter().enumerate() {
            for z in 0..n {
                t[u * n + z] = (v[j * n + z] % m) as u32;
            }
        }
        for &(w, d) in &self.order {
            match d {
                Derive::Star(s, y) => {
                    for z in 0..n {
                        let val = t[s * n + q.op(y, z)] as u64 + t[y * n + z] as u64 + m - t[s * n + z] as u64;
                        t[w * n + q.op(s, z)] = (val % m) as u32;
                    }
                }
                Derive::Ldiv(s, y) => {
                    for z in 0..n {
                        let val = t[y * n + q.op(s, z)] as u64 + m - t[s * n + q.op(w, z)] as u64 + t[s * n + z] as u64;
                        t[w * n + z] = (val % m) as u32;
                    }
                }
            }
        }
        t
    }

    /// Number of constraints: (CC) for `x ∈ S` and all `y, z`, then (QC).
    fn constraint_count(&self) -> usize {
        self.gens.len() * self.n * self.n + self.n
    }

    fn eval(&self, q: &QuandleTable, t: &[u32], c: usize, m: u64) -> u64 {
        let n = self.n;
        let nn = n * n;
        if c >= self.gens.len() * nn {
            let x = c - self.gens.len() * nn;
            return t[x * n + x] as u64 % m;
        }
        let s = self.gens[c / nn];
        let (y, z) = ((c % nn) / n, c % n);
        let lhs = t[q.op(s, y) * n + q.op(s, z)] as u64 + t[s * n + z] as u64;
        let rhs = t[s * n + q.op(y, z)] as u64 + t[y * n + z] as u64;
        (lhs + 2 * m - rhs) % m
    }

    fn solve(&self, q: &QuandleTable, m: u64) -> Vec<Vec<u32>> {
        let mu = self.unknowns();
        let total = self.constraint_count();
        // symbolic phase on a sample of constraints
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0c1);
        let sample: Vec<usize> = if total <= 2 * mu + 32 {
            (0..total).collect()
        } else {
            (0..2 * mu + 32).map(|_| rng.random_range(0..total)).collect()
        };
        let mut rows = vec![vec![0u64; mu]; sample.len()];
        let mut e = vec![0u64; mu];
        for i in 0..mu {
            e[i] = 1;
            let t = self.materialize(q, &e, m);
            e[i] = 0;
            for (r, &c) in rows.iter_mut().zip(&sample) {
                r[i] = self.eval(q, &t, c, m);
            }
        }
        let mut ech = Echelon::new(mu, m);
        for r in rows {
            ech.insert(r);
        }
        let candidates: Vec<Vec<u32>> = ech.kernel().iter().map(|v| self.materialize(q, v, m)).collect();
        // exact phase: every constraint on the candidates
        let k = candidates.len();
        let mut restricted = Echelon::new(k, m);
        let mut r = vec![0u64; k];
        for c in 0..total {
            let mut nonzero = false;
            for (slot, t) in r.iter_mut().zip(&candidates) {
                *slot = self.eval(q, t, c, m);
                nonzero |= *slot != 0;
            }
            if nonzero && !restricted.contains(&r) {
                restricted.insert(r.clone());
            }
        }
        if restricted.rank() == 0 {
            return candidates;
        }
        let nn = self.n * self.n;
        restricted
            .kernel()
            .iter()
            .map(|coef| {
                let mut t = vec![0u64; nn];
                for (&c, cand) in coef.iter().zip(&candidates) {
                    if c != 0 {
                        for (x, &y) in t.iter_mut().zip(cand) {
                            *x = (*x + c * y as u64) % m;
                        }
                    }
                }
                t.into_iter().map(|v| v as u32).collect()
            })
            .collect()
    }
}
