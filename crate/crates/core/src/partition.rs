//! Equivalence relations on `0..n` with dense, first-occurrence class ids.

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    class: Vec<u32>,
    count: usize,
}

impl Partition {
    /// Canonicalizes arbitrary labels: classes are numbered by first occurrence.
    pub fn from_labels<T: Copy + Eq + core::hash::Hash>(labels: &[T]) -> Self {
        let mut map = hashbrown::HashMap::new();
        let class = labels
            .iter()
            .map(|l| {
                let next = map.len() as u32;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Partition { class, count: map.len() }
    }

    pub fn discrete(n: usize) -> Self {
        Partition { class: (0..n as u32).collect(), count: n }
    }

    pub fn full(n: usize) -> Self {
        Partition { class: vec![0; n], count: (n > 0) as usize }
    }

    pub fn degree(&self) -> usize {
        self.class.len()
    }

    pub fn class_count(&self) -> usize {
        self.count
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class[x] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.class
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.count == self.class.len()
    }

    pub fn is_full(&self) -> bool {
        self.count <= 1
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, &c) in self.class.iter().enumerate() {
            out[c as usize].push(x);
        }
        out
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for &c in &self.class {
            out[c as usize] += 1;
        }
        out
    }

    /// `self ≤ other`: every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut img = vec![u32::MAX; self.count];
        for (x, &c) in self.class.iter().enumerate() {
            let o = other.class[x];
            if img[c as usize] == u32::MAX {
                img[c as usize] = o;
            } else if img[c as usize] != o {
                return false;
            }
        }
        true
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(u32, u32)> = self.class.iter().zip(&other.class).map(|(&a, &b)| (a, b)).collect();
        Partition::from_labels(&pairs)
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.degree());
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.count];
            for (x, &c) in p.class.iter().enumerate() {
                if first[c as usize] == usize::MAX {
                    first[c as usize] = x;
                } else {
                    uf.union(first[c as usize], x);
                }
            }
        }
        uf.partition()
    }
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller root so representatives stay deterministic
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    pub fn partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_ops() {
        let a = Partition::from_labels(&[5, 5, 7, 7, 9]);
        let b = Partition::from_labels(&[1, 2, 2, 3, 3]);
        assert_eq!(a.labels(), &[0, 0, 1, 1, 2]);
        assert!(a.join(&b).is_full());
        assert!(a.meet(&b).is_discrete());
        assert!(Partition::discrete(5).refines(&a));
        assert!(!a.refines(&b));
        assert_eq!(a.class_sizes(), vec![2, 2, 1]);
    }
}
