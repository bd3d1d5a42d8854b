//! Dense linear algebra over F_p with row-vector matrices `Vec<Vec<u64>>`.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::inv_mod;

pub type Mat = Vec<Vec<u64>>;

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(m: &mut Mat, p: u64) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] % p != 0) else { continue };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p).expect("prime modulus");
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &Mat, p: u64) -> usize {
    let mut a = m.clone();
    rref(&mut a, p).len()
}

/// Basis of `{x : M x = 0}` for a matrix with `ncols` columns.
pub fn kernel(m: &Mat, ncols: usize, p: u64) -> Mat {
    let mut a = m.clone();
    let pivots = rref(&mut a, p);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (row, &c) in a.iter().zip(&pivots) {
            v[c] = (p - row[free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// A row space kept in echelon form and grown one vector at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize, p: u64) -> Self {
        Echelon { ncols, p, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Subtracts multiples of the stored rows; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [u64]) {
        let p = self.p;
        // small moduli: entries grow by < p² per step, so reduce only on reads
        let lazy = p < 1 << 16;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c] % p;
            if f != 0 {
                let g = p - f;
                if lazy {
                    for (x, &y) in v[c..].iter_mut().zip(&row[c..]) {
                        *x += g * y;
                    }
                } else {
                    for (x, &y) in v[c..].iter_mut().zip(&row[c..]) {
                        *x = (*x + g * y) % p;
                    }
                }
            }
        }
        if lazy {
            for x in v.iter_mut() {
                *x %= p;
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x % self.p == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|&x| x % self.p != 0) else { return false };
        let inv = inv_mod(v[c], self.p).expect("prime modulus");
        for x in v.iter_mut() {
            *x = *x % self.p * inv % self.p;
        }
        self.rows.push(v);
        self.pivots.push(c);
        true
    }

    /// Basis of the vectors orthogonal to every stored row.
    pub fn kernel(&self) -> Mat {
        kernel(&self.rows, self.ncols, self.p)
    }
}

pub fn det_mod(m: &Mat, p: u64) -> u64 {
    let n = m.len();
    let mut a: Mat = m.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| a[i][c] != 0) else { return 0 };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = inv_mod(a[c][c], p).expect("prime modulus");
        for i in c + 1..n {
            let f = a[i][c] * inv % p;
            if f != 0 {
                for j in c..n {
                    a[i][j] = (a[i][j] + (p - f) * a[c][j]) % p;
                }
            }
        }
    }
    det
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    let mut c = vec![vec![0u64; m]; n];
    for i in 0..n {
        for t in 0..k {
            let x = a[i][t] % p;
            if x != 0 {
                for j in 0..m {
                    c[i][j] = (c[i][j] + x * b[t][j]) % p;
                }
            }
        }
    }
    c
}

pub fn inverse(m: &Mat, p: u64) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m.iter().zip(identity(n)).map(|(r, e)| r.iter().map(|&x| x % p).chain(e).collect()).collect();
    let piv = rref(&mut aug, p);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Characteristic polynomial `det(xI - M)`, coefficients from the constant
/// term up with the leading 1 included.
pub fn charpoly(m: &Mat, p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h: Mat = m.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    // similarity reduction to upper Hessenberg form
    for c in 0..n.saturating_sub(2) {
        let Some(piv) = (c + 1..n).find(|&i| h[i][c] != 0) else { continue };
        if piv != c + 1 {
            h.swap(piv, c + 1);
            for row in h.iter_mut() {
                row.swap(piv, c + 1);
            }
        }
        let inv = inv_mod(h[c + 1][c], p).expect("prime modulus");
        for i in c + 2..n {
            let f = h[i][c] * inv % p;
            if f == 0 {
                continue;
            }
            // row_i -= f row_{c+1}; col_{c+1} += f col_i
            for j in 0..n {
                h[i][j] = (h[i][j] + (p - f) * h[c + 1][j]) % p;
            }
            for row in h.iter_mut() {
                row[c + 1] = (row[c + 1] + f * row[i]) % p;
            }
        }
    }
    // polys[k] = charpoly of the leading k×k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let mut next = vec![0u64; k + 1];
        // (x - h[k-1][k-1]) * polys[k-1]
        for (i, &c) in polys[k - 1].iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + (p - h[k - 1][k - 1]) * c) % p;
        }
        let mut prod = 1u64;
        for i in (0..k - 1).rev() {
            prod = prod * h[i + 1][i] % p;
            let coef = prod * h[i][k - 1] % p;
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = (next[d] + (p - coef) * c) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Minimal polynomial, same coefficient convention as [`charpoly`].
pub fn minpoly(m: &Mat, p: u64) -> Vec<u64> {
    let n = m.len();
    let flat = |a: &Mat| -> Vec<u64> { a.iter().flatten().copied().collect() };
    let mut powers: Vec<Vec<u64>> = vec![flat(&identity(n))];
    let mut cur = identity(n);
    loop {
        cur = mat_mul(&cur, m, p);
        let k = powers.len();
        // solve Σ c_i M^i = -M^k
        let mut sys: Mat = (0..n * n)
            .map(|r| {
                let mut row: Vec<u64> = powers.iter().map(|v| v[r]).collect();
                row.push((p - flat(&cur)[r] % p) % p);
                row
            })
            .collect();
        let piv = rref(&mut sys, p);
        if piv.last() != Some(&k) {
            let mut coeffs = vec![0u64; k + 1];
            for (row, &c) in sys.iter().zip(&piv) {
                coeffs[c] = row[k];
            }
            coeffs[k] = 1;
            return coeffs;
        }
        powers.push(flat(&cur));
    }
}

/// Similarity test that is complete for dimension at most 3, where the pair
/// (characteristic, minimal polynomial) determines the rational canonical form.
pub fn similar_small(a: &Mat, b: &Mat, p: u64) -> Option<bool> {
    if a.len() != b.len() {
        return Some(false);
    }
    if a.len() > 3 {
        return None;
    }
    Some(charpoly(a, p) == charpoly(b, p) && minpoly(a, p) == minpoly(b, p))
}
