//! Permutations and permutation groups enumerated by breadth-first closure.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::partition::{Partition, UnionFind};

pub const DEFAULT_PERMGROUP_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Sorted cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, |acc, l| acc / crate::arith::gcd(acc as u64, l as u64) as usize * l)
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }
}

/// A permutation group with all elements listed. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    elems: Vec<u32>,
    index: HashTable<usize>,
    hasher: DefaultHashBuilder,
}

impl PermGroup {
    /// Closure of `gens` under composition, failing once `cap` elements are exceeded.
    pub fn generate(degree: usize, gens: &[Perm], cap: usize) -> Result<Self> {
        let mut g = PermGroup {
            degree,
            gens: Vec::new(),
            elems: Vec::new(),
            index: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
        };
        g.insert(&Perm::identity(degree).0);
        for p in gens {
            assert_eq!(p.degree(), degree);
            if !p.is_identity() && !g.gens.contains(p) {
                g.gens.push(p.clone());
            }
        }
        let mut queue = VecDeque::from([0usize]);
        let mut buf = vec![0u32; degree];
        while let Some(i) = queue.pop_front() {
            for k in 0..g.gens.len() {
                {
                    let x = &g.elems[i * degree..(i + 1) * degree];
                    let s = &g.gens[k].0;
                    for (b, &xv) in buf.iter_mut().zip(x) {
                        *b = s[xv as usize];
                    }
                }
                if g.find(&buf).is_none() {
                    if g.order() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    let j = g.insert(&buf);
                    queue.push_back(j);
                }
            }
        }
        Ok(g)
    }

    /// The subgroup of `self` made of the listed elements (which must form a subgroup).
    fn from_elements(degree: usize, gens: Vec<Perm>, elems: impl Iterator<Item = Vec<u32>>) -> Self {
        let mut g = PermGroup {
            degree,
            gens,
            elems: Vec::new(),
            index: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
        };
        g.insert(&Perm::identity(degree).0);
        for e in elems {
            if g.find(&e).is_none() {
                g.insert(&e);
            }
        }
        g
    }

    fn insert(&mut self, p: &[u32]) -> usize {
        let id = self.order();
        self.elems.extend_from_slice(p);
        let h = self.hasher.hash_one(p);
        let (elems, deg, hasher) = (&self.elems, self.degree, &self.hasher);
        self.index.insert_unique(h, id, |&j| hasher.hash_one(&elems[j * deg..(j + 1) * deg]));
        id
    }

    fn find(&self, p: &[u32]) -> Option<usize> {
        let h = self.hasher.hash_one(p);
        let d = self.degree;
        self.index.find(h, |&j| &self.elems[j * d..(j + 1) * d] == p).copied()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        if self.degree == 0 {
            return 1;
        }
        self.elems.len() / self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn element(&self, i: usize) -> &[u32] {
        &self.elems[i * self.degree..(i + 1) * self.degree]
    }

    pub fn perm(&self, i: usize) -> Perm {
        Perm(self.element(i).to_vec())
    }

    pub fn elements(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        self.find(p).is_some()
    }

    pub fn index_of(&self, p: &[u32]) -> Option<usize> {
        self.find(p)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Orbit partition of the natural action (computed from the generators).
    pub fn orbits(&self) -> Partition {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.gens {
            for (x, &y) in g.0.iter().enumerate() {
                uf.union(x, y as usize);
            }
        }
        uf.partition()
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().class_count() <= 1
    }

    /// Elements fixing point `x`.
    pub fn stabilizer(&self, x: usize) -> PermGroup {
        self.filter(|p| p[x] as usize == x)
    }

    /// The subset of elements satisfying `keep`; the caller guarantees it is a subgroup.
    pub fn filter(&self, keep: impl Fn(&[u32]) -> bool) -> PermGroup {
        let elems: Vec<Vec<u32>> = self.elements().filter(|p| keep(p)).map(|p| p.to_vec()).collect();
        let gens = elems.iter().filter(|p| !Perm((*p).clone()).is_identity()).map(|p| Perm(p.clone())).collect();
        PermGroup::from_elements(self.degree, gens, elems.into_iter())
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.order() <= other.order() && self.elements().all(|p| other.contains(p))
    }

    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// Smallest subgroup of `self` containing `extra` and normalized by `self`.
    pub fn normal_closure(&self, extra: &[Perm], cap: usize) -> Result<PermGroup> {
        let mut gens: Vec<Perm> = extra.iter().filter(|p| !p.is_identity()).cloned().collect();
        let mut h = PermGroup::generate(self.degree, &gens, cap)?;
        loop {
            let mut added = false;
            let conj: Vec<Perm> = self
                .gens
                .iter()
                .flat_map(|g| {
                    let gi = g.inverse();
                    gens.iter().map(move |s| g.compose(s).compose(&gi))
                })
                .collect();
            for c in conj {
                if !h.contains(&c.0) {
                    gens.push(c);
                    added = true;
                }
            }
            if !added {
                return Ok(h);
            }
            h = PermGroup::generate(self.degree, &gens, cap)?;
        }
    }

    /// Commutator subgroup `[self, self]`.
    pub fn derived_subgroup(&self, cap: usize) -> Result<PermGroup> {
        let mut comms = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[..i] {
                let c = a.inverse().compose(&b.inverse()).compose(a).compose(b);
                if !c.is_identity() && !comms.contains(&c) {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms, cap)
    }

    /// `self` as an abstract group table (element order as enumerated).
    pub fn to_group_table(&self) -> Result<GroupTable> {
        let m = self.order();
        let mut rows = vec![vec![0usize; m]; m];
        let mut buf = vec![0u32; self.degree];
        for (a, row) in rows.iter_mut().enumerate() {
            let pa = self.element(a);
            for (b, slot) in row.iter_mut().enumerate() {
                // a·b = a ∘ b
                let pb = self.element(b);
                for (t, &x) in buf.iter_mut().zip(pb) {
                    *t = pa[x as usize];
                }
                *slot = self.find(&buf).ok_or_else(|| Error::Malformed("element set not closed".into()))?;
            }
        }
        crate::group::validate_group(&rows)
    }

    /// Normality of `self` in `parent`, tested on the generators of `parent`.
    pub fn is_normalized_by(&self, parent: &PermGroup) -> bool {
        parent.gens.iter().all(|g| {
            let gi = g.inverse();
            self.gens.iter().all(|s| self.contains(&g.compose(s).compose(&gi).0))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_closure() {
        let t = Perm(vec![1, 0, 2, 3]);
        let c = Perm(vec![1, 2, 3, 0]);
        let s4 = PermGroup::generate(4, &[t, c], 100).unwrap();
        assert_eq!(s4.order(), 24);
        assert_eq!(s4.derived_subgroup(100).unwrap().order(), 12);
        assert!(s4.is_transitive());
        assert_eq!(s4.stabilizer(0).order(), 6);
        assert!(matches!(PermGroup::generate(4, &s4.gens, 10), Err(Error::CapExceeded(10))));
        let gt = s4.to_group_table().unwrap();
        assert_eq!(gt.order(), 24);
        assert!(!gt.is_abelian());
    }

    #[test]
    fn cycle_types() {
        let p = Perm(vec![1, 2, 0, 4, 3]);
        assert_eq!(p.cycle_type(), vec![2, 3]);
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
    }
}
