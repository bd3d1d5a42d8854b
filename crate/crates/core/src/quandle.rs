//! Finite left quasigroups, racks and quandles as operation tables, with
//! their multiplication groups and congruences.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Automorphism, GroupTable, Subgroup};
use crate::partition::{Partition, UnionFind};
use crate::perm::{Perm, PermGroup};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuandleFlags {
    pub is_rack: bool,
    pub is_quandle: bool,
    pub is_latin: bool,
    pub is_involutory: bool,
    pub is_connected: bool,
    pub is_faithful: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuandleTable {
    n: usize,
    star: Vec<u32>,
    ldiv: Vec<u32>,
    flags: QuandleFlags,
    rack_witness: Option<(usize, usize, usize)>,
}

impl QuandleTable {
    /// Validates a raw table: each row must be a permutation. Axiom flags are
    /// then computed by exhaustive checks.
    pub fn validate(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Malformed("empty table".into()));
        }
        let mut star = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!("row {x} has length {}", row.len())));
            }
            for &y in row {
                if y >= n {
                    return Err(Error::Malformed(format!("entry {y} out of range in row {x}")));
                }
                star.push(y as u32);
            }
        }
        Self::from_star(n, star)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut star = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let v = f(x, y);
                if v >= n {
                    return Err(Error::Malformed(format!("entry {v} out of range at ({x},{y})")));
                }
                star.push(v as u32);
            }
        }
        Self::from_star(n, star)
    }

    pub(crate) fn from_star(n: usize, star: Vec<u32>) -> Result<Self> {
        let mut ldiv = vec![u32::MAX; n * n];
        for x in 0..n {
            for y in 0..n {
                let v = star[x * n + y] as usize;
                if ldiv[x * n + v] != u32::MAX {
                    return Err(Error::RowNotBijective(x));
                }
                ldiv[x * n + v] = y as u32;
            }
        }
        let mut q = QuandleTable { n, star, ldiv, flags: QuandleFlags::default(), rack_witness: None };
        q.compute_flags();
        Ok(q)
    }

    fn compute_flags(&mut self) {
        let n = self.n;
        self.rack_witness = self.find_rack_violation();
        let is_rack = self.rack_witness.is_none();
        let idempotent = (0..n).all(|x| self.op(x, x) == x);
        let is_latin = (0..n).all(|y| {
            let mut seen = vec![false; n];
            (0..n).all(|x| !core::mem::replace(&mut seen[self.op(x, y)], true))
        });
        let is_involutory = (0..n).all(|x| (0..n).all(|y| self.op(x, self.op(x, y)) == y));
        let mut uf = UnionFind::new(n);
        for x in 0..n {
            for y in 0..n {
                uf.union(y, self.op(x, y));
            }
        }
        let is_connected = uf.partition().class_count() == 1;
        let is_faithful = self.cayley_kernel().is_discrete();
        self.flags = QuandleFlags {
            is_rack,
            is_quandle: is_rack && idempotent,
            is_latin,
            is_involutory,
            is_connected,
            is_faithful,
        };
    }

    fn find_rack_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            let lx = &self.star[x * n..(x + 1) * n];
            for y in 0..n {
                let ly = &self.star[y * n..(y + 1) * n];
                let lxy = &self.star[lx[y] as usize * n..(lx[y] as usize + 1) * n];
                for z in 0..n {
                    if lx[ly[z] as usize] != lxy[lx[z] as usize] {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn flags(&self) -> QuandleFlags {
        self.flags
    }

    /// First triple with `x*(y*z) ≠ (x*y)*(x*z)`, if any.
    pub fn rack_witness(&self) -> Option<(usize, usize, usize)> {
        self.rack_witness
    }

    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.star[x * self.n + y] as usize
    }

    /// Left division `x\y`, the unique `z` with `x*z = y`.
    #[inline]
    pub fn ldiv(&self, x: usize, y: usize) -> usize {
        self.ldiv[x * self.n + y] as usize
    }

    /// Right division `x/y`, the unique `z` with `z*y = x` (latin only).
    pub fn rdiv(&self, x: usize, y: usize) -> Result<usize> {
        (0..self.n).find(|&z| self.op(z, y) == x).ok_or(Error::NotLatin)
    }

    /// Table of right divisions `rdiv[x][y] = x/y`.
    pub fn rdiv_table(&self) -> Result<Vec<u32>> {
        if !self.flags.is_latin {
            return Err(Error::NotLatin);
        }
        let n = self.n;
        let mut t = vec![0u32; n * n];
        for z in 0..n {
            for y in 0..n {
                t[self.op(z, y) * n + y] = z as u32;
            }
        }
        Ok(t)
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.star[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.row(x).iter().map(|&v| v as usize).collect()).collect()
    }

    pub fn left(&self, x: usize) -> Perm {
        Perm(self.row(x).to_vec())
    }

    fn require_quandle(&self) -> Result<()> {
        if self.flags.is_quandle {
            Ok(())
        } else {
            Err(Error::PreconditionFailed("not a quandle".into()))
        }
    }

    fn require_connected(&self) -> Result<()> {
        self.require_quandle()?;
        if self.flags.is_connected {
            Ok(())
        } else {
            Err(Error::NotConnected)
        }
    }

    pub fn is_connected(&self) -> bool {
        self.flags.is_connected
    }

    /// Relabels points by the bijection `perm` (new label of old point x is perm[x]).
    pub fn relabel(&self, perm: &[usize]) -> QuandleTable {
        let n = self.n;
        let mut star = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                star[perm[x] * n + perm[y]] = perm[self.op(x, y)] as u32;
            }
        }
        QuandleTable::from_star(n, star).expect("relabeling preserves bijective rows")
    }

    /// Whether `map` (from `self` to `other`) preserves the operation.
    pub fn is_hom_to(&self, other: &QuandleTable, map: &[usize]) -> Option<(usize, usize)> {
        for x in 0..self.n {
            for y in 0..self.n {
                if map[self.op(x, y)] != other.op(map[x], map[y]) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Cayley kernel: `x ~ y` iff `L_x = L_y`.
    pub fn cayley_kernel(&self) -> Partition {
        let rows: Vec<&[u32]> = (0..self.n).map(|x| self.row(x)).collect();
        Partition::from_labels(&rows)
    }
}

pub fn validate_left_quasigroup(rows: &[Vec<usize>]) -> Result<QuandleTable> {
    QuandleTable::validate(rows)
}

pub fn lmlt(q: &QuandleTable, cap: usize) -> Result<PermGroup> {
    let gens: Vec<Perm> = (0..q.size()).map(|x| q.left(x)).collect();
    PermGroup::generate(q.size(), &gens, cap)
}

/// Orbits of `LMlt(Q)`, from the left translations alone.
pub fn lmlt_orbits(q: &QuandleTable) -> Partition {
    let n = q.size();
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        for y in 0..n {
            uf.union(y, q.op(x, y));
        }
    }
    uf.partition()
}

/// Generators `L_x L_0⁻¹` of the displacement group.
pub fn dis_generators(q: &QuandleTable) -> Vec<Perm> {
    let l0i = q.left(0).inverse();
    (1..q.size()).map(|x| q.left(x).compose(&l0i)).collect()
}

pub fn dis(q: &QuandleTable, cap: usize) -> Result<PermGroup> {
    PermGroup::generate(q.size(), &dis_generators(q), cap)
}

/// Orbits of a permutation group; when `check` is set the group must be
/// normalized by every left translation.
pub fn orbit_congruence(q: &QuandleTable, n: &PermGroup, check: bool) -> Result<Partition> {
    if check {
        for x in 0..q.size() {
            let lx = q.left(x);
            let lxi = lx.inverse();
            for (i, g) in n.generators().iter().enumerate() {
                if !n.contains(&lx.compose(g).compose(&lxi).0) {
                    return Err(Error::NotNormal(i, x));
                }
            }
        }
    }
    Ok(n.orbits())
}

pub fn cayley_kernel(q: &QuandleTable) -> Partition {
    q.cayley_kernel()
}

/// Checks compatibility of `alpha` with `*` and `\` in both arguments.
pub fn check_congruence(q: &QuandleTable, alpha: &Partition) -> Result<()> {
    let n = q.size();
    if alpha.degree() != n {
        return Err(Error::Malformed("partition degree differs from quandle size".into()));
    }
    let mut rep = vec![usize::MAX; alpha.class_count()];
    for x in 0..n {
        if rep[alpha.class_of(x)] == usize::MAX {
            rep[alpha.class_of(x)] = x;
        }
    }
    for x in 0..n {
        let r = rep[alpha.class_of(x)];
        if r == x {
            continue;
        }
        for y in 0..n {
            if !alpha.same(q.op(x, y), q.op(r, y)) || !alpha.same(q.ldiv(x, y), q.ldiv(r, y)) {
                return Err(Error::NotCongruence(x, r, y, y));
            }
            if !alpha.same(q.op(y, x), q.op(y, r)) || !alpha.same(q.ldiv(y, x), q.ldiv(y, r)) {
                return Err(Error::NotCongruence(y, y, x, r));
            }
        }
    }
    Ok(())
}

/// Smallest congruence containing the given pairs.
pub fn congruence_generated(q: &QuandleTable, pairs: &[(usize, usize)]) -> Partition {
    let n = q.size();
    let mut uf = UnionFind::new(n);
    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            work.push_back((a, b));
        }
    }
    while let Some((a, b)) = work.pop_front() {
        for y in 0..n {
            for (u, v) in [
                (q.op(a, y), q.op(b, y)),
                (q.op(y, a), q.op(y, b)),
                (q.ldiv(a, y), q.ldiv(b, y)),
                (q.ldiv(y, a), q.ldiv(y, b)),
            ] {
                if uf.union(u, v) {
                    work.push_back((u, v));
                }
            }
        }
    }
    uf.partition()
}

/// Quotient by a congruence; classes are numbered by their least element.
pub fn quotient_quandle(q: &QuandleTable, alpha: &Partition) -> Result<(QuandleTable, Vec<usize>)> {
    check_congruence(q, alpha)?;
    let m = alpha.class_count();
    let classes = alpha.classes();
    let star = (0..m)
        .flat_map(|a| {
            let classes = &classes;
            (0..m).map(move |b| alpha.class_of(q.op(classes[a][0], classes[b][0])) as u32)
        })
        .collect();
    let map = (0..q.size()).map(|x| alpha.class_of(x)).collect();
    Ok((QuandleTable::from_star(m, star)?, map))
}

/// `Dis_α`, generated by `L_x L_y⁻¹` for α-related pairs.
pub fn dis_rel(q: &QuandleTable, alpha: &Partition, cap: usize) -> Result<PermGroup> {
    let mut gens = Vec::new();
    for class in alpha.classes() {
        let r = q.left(class[0]).inverse();
        for &x in &class[1..] {
            gens.push(q.left(x).compose(&r));
        }
    }
    PermGroup::generate(q.size(), &gens, cap)
}

/// `Dis^α`: displacements mapping every α-class to itself, i.e. the kernel
/// of the induced map onto `LMlt(Q/α)` restricted to `Dis(Q)`.
pub fn dis_ker(q: &QuandleTable, alpha: &Partition, cap: usize) -> Result<PermGroup> {
    let d = dis(q, cap)?;
    Ok(d.filter(|h| h.iter().enumerate().all(|(x, &y)| alpha.same(x, y as usize))))
}

/// Orbits of the derived subgroup of `Dis(Q)`.
pub fn gamma_q(q: &QuandleTable, cap: usize) -> Result<Partition> {
    q.require_connected()?;
    Ok(dis(q, cap)?.derived_subgroup(cap)?.orbits())
}

/// Generators `L_x^k L_0^{-k}` of `H_k`.
pub fn hn_group(q: &QuandleTable, k: i64, cap: usize) -> Result<PermGroup> {
    let l0 = q.left(0).pow(-k);
    let gens: Vec<Perm> = (1..q.size()).map(|x| q.left(x).pow(k).compose(&l0)).collect();
    PermGroup::generate(q.size(), &gens, cap)
}

pub fn hn_congruence(q: &QuandleTable, k: i64) -> Partition {
    let l0 = q.left(0).pow(-k);
    let mut uf = UnionFind::new(q.size());
    for x in 1..q.size() {
        let g = q.left(x).pow(k).compose(&l0);
        for (a, &b) in g.0.iter().enumerate() {
            uf.union(a, b as usize);
        }
    }
    uf.partition()
}

/// Closure of `seed` under `*` and `\`, sorted.
pub fn subquandle_generated(q: &QuandleTable, seed: &[usize]) -> Vec<usize> {
    let n = q.size();
    let mut inside = vec![false; n];
    let mut list: Vec<usize> = Vec::new();
    for &s in seed {
        if !inside[s] {
            inside[s] = true;
            list.push(s);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let a = list[i];
        for j in 0..=i {
            let b = list[j];
            for v in [q.op(a, b), q.op(b, a), q.ldiv(a, b), q.ldiv(b, a)] {
                if !inside[v] {
                    inside[v] = true;
                    list.push(v);
                }
            }
        }
        i += 1;
    }
    list.sort_unstable();
    list
}

/// The subquandle on the given sorted points, relabeled `0..k` in order.
pub fn subquandle_table(q: &QuandleTable, points: &[usize]) -> Result<QuandleTable> {
    let mut pos = vec![usize::MAX; q.size()];
    for (i, &x) in points.iter().enumerate() {
        pos[x] = i;
    }
    QuandleTable::from_fn(points.len(), |a, b| {
        let v = pos[q.op(points[a], points[b])];
        if v == usize::MAX {
            points.len()
        } else {
            v
        }
    })
}

/// Coset representation `Q ≅ Q(Dis, Dis_x, conj by L_x)`.
#[derive(Clone, Debug)]
pub struct CosetRepresentation {
    pub dis: PermGroup,
    pub group: GroupTable,
    pub stabilizer: Subgroup,
    pub conj: Automorphism,
    pub base: usize,
}

impl CosetRepresentation {
    /// Point of `Q` corresponding to the coset of group element `g`.
    pub fn point_of(&self, g: usize) -> usize {
        self.dis.element(g)[self.base] as usize
    }
}

pub fn coset_representation(q: &QuandleTable, x: usize, cap: usize) -> Result<CosetRepresentation> {
    q.require_connected()?;
    let d = dis(q, cap)?;
    let group = d.to_group_table()?;
    let stabilizer = Subgroup::from_members(d.elements().map(|h| h[x] as usize == x).collect());
    let lx = q.left(x);
    let lxi = lx.inverse();
    let image = (0..d.order())
        .map(|i| {
            let c = lx.compose(&d.perm(i)).compose(&lxi);
            d.index_of(&c.0).map(|j| j as u32).ok_or(Error::NotInDis)
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(CosetRepresentation { dis: d, group, stabilizer, conj: Automorphism { image }, base: x })
}

pub fn is_principal(q: &QuandleTable, cap: usize) -> Result<bool> {
    q.require_connected()?;
    Ok(dis(q, cap)?.order() == q.size())
}
