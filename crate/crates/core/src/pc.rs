//! Power-commutator presentations of p-groups and collection from the left.
//!
//! Elements are exponent vectors `a_1^{e_1} ... a_k^{e_k}` with `0 ≤ e_i < p`.
//! An element's table index is `Σ e_i p^(i-1)`, so the identity is 0 and
//! generator `a_i` has index `p^(i-1)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::group::{validate_group, GroupTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolycyclicPresentation {
    pub p: u32,
    pub ngens: usize,
    /// `power[i]` is the exponent vector of `a_i^p`.
    power: Vec<Vec<u32>>,
    /// `comm[j][i]` (j > i) is the exponent vector of `[a_j, a_i] = a_j⁻¹ a_i⁻¹ a_j a_i`.
    comm: Vec<Vec<Vec<u32>>>,
}

impl PolycyclicPresentation {
    pub fn new(p: u32, ngens: usize) -> Self {
        PolycyclicPresentation {
            p,
            ngens,
            power: vec![vec![0; ngens]; ngens],
            comm: vec![vec![vec![0; ngens]; ngens]; ngens],
        }
    }

    /// `a_i^p = word` (0-based generator indices; the word must only
    /// involve generators after `i`).
    pub fn power(mut self, i: usize, word: &[(usize, u32)]) -> Self {
        assert!(word.iter().all(|&(g, _)| g > i));
        self.power[i] = self.word(word);
        self
    }

    /// `[a_j, a_i] = word` for `j > i`.
    pub fn comm(mut self, j: usize, i: usize, word: &[(usize, u32)]) -> Self {
        assert!(j > i && word.iter().all(|&(g, _)| g > j));
        self.comm[j][i] = self.word(word);
        self
    }

    fn word(&self, w: &[(usize, u32)]) -> Vec<u32> {
        let mut v = vec![0; self.ngens];
        for &(g, e) in w {
            v[g] = e % self.p;
        }
        v
    }

    pub fn power_relation(&self, i: usize) -> &[u32] {
        &self.power[i]
    }

    pub fn comm_relation(&self, j: usize, i: usize) -> &[u32] {
        &self.comm[j][i]
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.ngens as u32)
    }

    pub fn index(&self, e: &[u32]) -> usize {
        e.iter().rev().fold(0usize, |acc, &x| acc * self.p as usize + x as usize)
    }

    pub fn exponents(&self, mut x: usize) -> Vec<u32> {
        let p = self.p as usize;
        (0..self.ngens)
            .map(|_| {
                let d = (x % p) as u32;
                x /= p;
                d
            })
            .collect()
    }

    pub fn generator(&self, i: usize) -> usize {
        (self.p as usize).pow(i as u32)
    }

    /// Multiplies the normal form `e` on the right by generator `a_k`.
    fn mul_gen(&self, e: &mut [u32], k: usize) {
        let suffix: Vec<u32> = e[k + 1..].to_vec();
        for x in e[k + 1..].iter_mut() {
            *x = 0;
        }
        e[k] += 1;
        if e[k] == self.p {
            e[k] = 0;
            for j in k + 1..self.ngens {
                for _ in 0..self.power[k][j] {
                    self.mul_gen(e, j);
                }
            }
        }
        // conjugate the old suffix by a_k: a_k⁻¹ a_j a_k = a_j [a_j, a_k]
        for (off, &s) in suffix.iter().enumerate() {
            let j = k + 1 + off;
            for _ in 0..s {
                self.mul_gen(e, j);
                for l in j + 1..self.ngens {
                    for _ in 0..self.comm[j][k][l] {
                        self.mul_gen(e, l);
                    }
                }
            }
        }
    }

    /// Collected product of two normal forms.
    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let mut e = x.to_vec();
        for (k, &c) in y.iter().enumerate() {
            for _ in 0..c {
                self.mul_gen(&mut e, k);
            }
        }
        e
    }

    /// Realizes the full multiplication table and validates it.
    pub fn to_table(&self) -> Result<GroupTable> {
        let n = self.order();
        let p = self.p as usize;
        // right multiplication by each generator
        let mut right = vec![vec![0usize; n]; self.ngens];
        for x in 0..n {
            for (k, r) in right.iter_mut().enumerate() {
                let mut e = self.exponents(x);
                self.mul_gen(&mut e, k);
                r[x] = self.index(&e);
            }
        }
        let mut cols = vec![vec![0usize; n]; n]; // cols[y][x] = x*y
        for x in 0..n {
            cols[0][x] = x;
        }
        for y in 1..n {
            let mut k = 0;
            let mut t = y;
            let mut last = 0;
            while t > 0 {
                if t % p != 0 {
                    last = k;
                }
                t /= p;
                k += 1;
            }
            let prev = y - p.pow(last as u32);
            for x in 0..n {
                cols[y][x] = right[last][cols[prev][x]];
            }
        }
        let rows: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| cols[y][x]).collect()).collect();
        validate_group(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{center, is_associative_exhaustive};

    #[test]
    fn heisenberg_three() {
        let pc = PolycyclicPresentation::new(3, 3).comm(1, 0, &[(2, 1)]);
        let g = pc.to_table().unwrap();
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());
        assert!(is_associative_exhaustive(&g));
        assert_eq!(center(&g).order(), 3);
        let (a1, a2, a3) = (pc.generator(0), pc.generator(1), pc.generator(2));
        assert_eq!(g.commutator(a2, a1), a3);
    }

    #[test]
    fn cyclic_via_powers() {
        let pc = PolycyclicPresentation::new(3, 2).power(0, &[(1, 1)]);
        let g = pc.to_table().unwrap();
        assert_eq!(g.element_order(pc.generator(0)), 9);
        assert!(g.is_abelian());
    }
}
