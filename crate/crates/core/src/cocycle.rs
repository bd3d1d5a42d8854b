//! Constant quandle cocycles with values in `Z_q` or in a finite group,
//! extensions `Q ×_θ S` and the triviality tests.
//!
//! Group-valued entries act on the fiber by left multiplication, so the
//! cocycle condition reads `θ[xy][xz]·θ[x][z] = θ[x][yz]·θ[y][z]`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::group::{cyclic, Automorphism, GroupTable};
use crate::partition::{Partition, UnionFind};
use crate::quandle::QuandleTable;

/// Largest target group accepted for group-valued cocycles.
pub const GROUP_TARGET_LIMIT: usize = 625;

/// A cocycle with values in the additive group `Z_q`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCocycle {
    n: usize,
    modulus: u64,
    theta: Vec<u32>,
}

fn check_abelian(q: &QuandleTable, m: u64, t: &[u32]) -> Result<()> {
    let n = q.size();
    if let Some(x) = (0..n).find(|&x| t[x * n + x] != 0) {
        return Err(Error::QCViolation(x));
    }
    let at = |a: usize, b: usize| t[a * n + b] as u64;
    for x in 0..n {
        for y in 0..n {
            let xy = q.op(x, y);
            for z in 0..n {
                let lhs = at(xy, q.op(x, z)) + at(x, z);
                let rhs = at(x, q.op(y, z)) + at(y, z);
                if lhs % m != rhs % m {
                    return Err(Error::CCViolation(x, y, z));
                }
            }
        }
    }
    Ok(())
}

impl AbelianCocycle {
    pub fn new(q: &QuandleTable, modulus: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let n = q.size();
        if modulus < 2 || modulus > u32::MAX as u64 {
            return Err(Error::BadParams(alloc::format!("modulus {modulus}")));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed(alloc::format!("cocycle must be {n}x{n}")));
        }
        let theta: Vec<u32> = rows.iter().flatten().map(|&v| (v % modulus) as u32).collect();
        check_abelian(q, modulus, &theta)?;
        Ok(AbelianCocycle { n, modulus, theta })
    }

    /// Validates a flat row-major matrix.
    pub fn from_flat(q: &QuandleTable, modulus: u64, theta: Vec<u32>) -> Result<Self> {
        if theta.len() != q.size() * q.size() {
            return Err(Error::Malformed("cocycle has the wrong number of entries".into()));
        }
        let theta: Vec<u32> = theta.into_iter().map(|v| (v as u64 % modulus) as u32).collect();
        check_abelian(q, modulus, &theta)?;
        Ok(AbelianCocycle { n: q.size(), modulus, theta })
    }

    pub(crate) fn from_flat_trusted(n: usize, modulus: u64, theta: Vec<u32>) -> Self {
        AbelianCocycle { n, modulus, theta }
    }

    pub fn zero(n: usize, modulus: u64) -> Self {
        AbelianCocycle { n, modulus, theta: vec![0; n * n] }
    }

    /// `δγ[x][y] = γ(x*y) − γ(y)`.
    pub fn coboundary(q: &QuandleTable, modulus: u64, gamma: &[u64]) -> Self {
        let n = q.size();
        let mut theta = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                theta[x * n + y] = ((gamma[q.op(x, y)] % modulus + modulus - gamma[y] % modulus) % modulus) as u32;
            }
        }
        AbelianCocycle { n, modulus, theta }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.theta[x * self.n + y] as u64
    }

    pub fn entries(&self) -> &[u32] {
        &self.theta
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.theta.chunks(self.n.max(1)).map(|r| r.iter().map(|&v| v as u64).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.theta.iter().all(|&v| v == 0)
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &AbelianCocycle, k: u64) -> AbelianCocycle {
        let m = self.modulus;
        let theta = self
            .theta
            .iter()
            .zip(&other.theta)
            .map(|(&a, &b)| ((a as u64 + k % m * b as u64) % m) as u32)
            .collect();
        AbelianCocycle { n: self.n, modulus: m, theta }
    }

    /// The same cocycle with values in the cyclic group table `Z_q`.
    pub fn to_group_cocycle(&self) -> GroupCocycle {
        GroupCocycle { n: self.n, group: cyclic(self.modulus), theta: self.theta.clone() }
    }
}

/// A cocycle with values in a finite group given by its table.
#[derive(Clone, Debug)]
pub struct GroupCocycle {
    n: usize,
    group: GroupTable,
    theta: Vec<u32>,
}

fn check_group(q: &QuandleTable, g: &GroupTable, t: &[u32]) -> Result<()> {
    let n = q.size();
    if let Some(x) = (0..n).find(|&x| t[x * n + x] != 0) {
        return Err(Error::QCViolation(x));
    }
    let at = |a: usize, b: usize| t[a * n + b] as usize;
    for x in 0..n {
        for y in 0..n {
            let xy = q.op(x, y);
            for z in 0..n {
                let lhs = g.mul(at(xy, q.op(x, z)), at(x, z));
                let rhs = g.mul(at(x, q.op(y, z)), at(y, z));
                if lhs != rhs {
                    return Err(Error::CCViolation(x, y, z));
                }
            }
        }
    }
    Ok(())
}

impl GroupCocycle {
    pub fn new(q: &QuandleTable, group: GroupTable, rows: &[Vec<usize>]) -> Result<Self> {
        let n = q.size();
        if group.order() > GROUP_TARGET_LIMIT {
            return Err(Error::TooLarge(group.order(), GROUP_TARGET_LIMIT));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed(alloc::format!("cocycle must be {n}x{n}")));
        }
        if rows.iter().flatten().any(|&v| v >= group.order()) {
            return Err(Error::Malformed("cocycle entry outside the group".into()));
        }
        let theta: Vec<u32> = rows.iter().flatten().map(|&v| v as u32).collect();
        check_group(q, &group, &theta)?;
        Ok(GroupCocycle { n, group, theta })
    }

    pub fn trivial(n: usize, group: GroupTable) -> Self {
        GroupCocycle { n, group, theta: vec![0; n * n] }
    }

    /// `δγ[x][y] = γ(x*y)·γ(y)⁻¹`.
    pub fn coboundary(q: &QuandleTable, group: GroupTable, gamma: &[usize]) -> Self {
        let n = q.size();
        let mut theta = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                theta[x * n + y] = group.mul(gamma[q.op(x, y)], group.inv(gamma[y])) as u32;
            }
        }
        GroupCocycle { n, group, theta }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.theta[x * self.n + y] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.theta.chunks(self.n.max(1)).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    pub fn is_trivial_entrywise(&self) -> bool {
        self.theta.iter().all(|&v| v == 0)
    }
}

/// `(x,a) ↦ x·|S| + a` with `(x,a)*(y,b) = (x*y, θ[x][y]·b)`, and the fibers of the projection.
pub fn extension(q: &QuandleTable, theta: &GroupCocycle) -> Result<(QuandleTable, Partition)> {
    let (n, s) = (q.size(), theta.group.order());
    let mut star = vec![0u32; n * s * n * s];
    for x in 0..n {
        for y in 0..n {
            let xy = q.op(x, y);
            let t = theta.get(x, y);
            for a in 0..s {
                let row = (x * s + a) * n * s;
                for b in 0..s {
                    star[row + y * s + b] = (xy * s + theta.group.mul(t, b)) as u32;
                }
            }
        }
    }
    let e = QuandleTable::from_star(n * s, star)?;
    let fibers = Partition::from_labels(&(0..n * s).map(|i| i / s).collect::<Vec<_>>());
    Ok((e, fibers))
}

pub fn abelian_extension(q: &QuandleTable, theta: &AbelianCocycle) -> Result<(QuandleTable, Partition)> {
    extension(q, &theta.to_group_cocycle())
}

/// Orbits of `LMlt(Q ×_θ S)` without building the extension table.
pub fn extension_orbits(q: &QuandleTable, theta: &GroupCocycle) -> Partition {
    let (n, s) = (q.size(), theta.group.order());
    let mut uf = UnionFind::new(n * s);
    for x in 0..n {
        for y in 0..n {
            let (xy, t) = (q.op(x, y), theta.get(x, y));
            for b in 0..s {
                uf.union(y * s + b, xy * s + theta.group.mul(t, b));
            }
        }
    }
    uf.partition()
}

/// For connected `Q`: `θ ~ 1` iff every orbit of the extension has `|Q|` points.
pub fn is_trivial_via_orbit(q: &QuandleTable, theta: &GroupCocycle) -> Result<bool> {
    if !q.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = q.size();
    Ok(extension_orbits(q, theta).class_sizes().iter().all(|&c| c == n))
}

/// Sweeps from point 0 along `L_x` then `L_x⁻¹` edges, setting
/// `γ(x*y) = θ[x][y]·γ(y)`. Returns `γ` with `δγ = θ` when the sweep is consistent.
pub fn trivialize(q: &QuandleTable, theta: &GroupCocycle) -> Result<Option<Vec<usize>>> {
    if !q.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = q.size();
    let g = &theta.group;
    let mut gamma = vec![usize::MAX; n];
    gamma[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(y) = queue.pop_front() {
        for x in 0..n {
            let w = q.op(x, y);
            if gamma[w] == usize::MAX {
                gamma[w] = g.mul(theta.get(x, y), gamma[y]);
                queue.push_back(w);
            }
        }
        for x in 0..n {
            let w = q.ldiv(x, y);
            if gamma[w] == usize::MAX {
                gamma[w] = g.mul(g.inv(theta.get(x, w)), gamma[y]);
                queue.push_back(w);
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if gamma[q.op(x, y)] != g.mul(theta.get(x, y), gamma[y]) {
                return Ok(None);
            }
        }
    }
    Ok(Some(gamma))
}

/// `θ'[x][y] = θ[(xy)/u][u]⁻¹ · θ[x][y] · θ[y/u][u]`, so that `θ'[x][u] = 1`.
pub fn u_normalize(q: &QuandleTable, theta: &GroupCocycle, u: usize) -> Result<GroupCocycle> {
    if !q.flags().is_latin {
        return Err(Error::NotLatin);
    }
    let n = q.size();
    let rdiv = q.rdiv_table()?;
    let g = &theta.group;
    let over_u = |x: usize| rdiv[x * n + u] as usize;
    let mut out = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let left = g.inv(theta.get(over_u(q.op(x, y)), u));
            let right = theta.get(over_u(y), u);
            out[x * n + y] = g.mul(g.mul(left, theta.get(x, y)), right) as u32;
        }
    }
    Ok(GroupCocycle { n, group: g.clone(), theta: out })
}

/// On a latin quandle a `u`-normalized cocycle is trivial iff it is identically 1.
pub fn is_trivial_latin(q: &QuandleTable, theta: &GroupCocycle, u: usize) -> Result<bool> {
    Ok(u_normalize(q, theta, u)?.is_trivial_entrywise())
}

/// Target quandle structure on the group for split cocycles.
#[derive(Clone, Debug)]
pub enum SplitTarget {
    /// `a*b = a·f(b·a⁻¹)`.
    Twisted(Automorphism),
    /// `a*b = a·b⁻¹·a`.
    Core,
}

/// `θ(ρ)[x][y] = ρ(x)·ρ(y)⁻¹` for a morphism `ρ: Q → target(G)`.
pub fn split_cocycle(q: &QuandleTable, g: &GroupTable, rho: &[usize], target: &SplitTarget) -> Result<GroupCocycle> {
    let n = q.size();
    if rho.len() != n || rho.iter().any(|&r| r >= g.order()) {
        return Err(Error::Malformed("point map has the wrong shape".into()));
    }
    if g.order() > GROUP_TARGET_LIMIT {
        return Err(Error::TooLarge(g.order(), GROUP_TARGET_LIMIT));
    }
    let op = |a: usize, b: usize| match target {
        SplitTarget::Twisted(f) => g.mul(a, f.apply(g.mul(b, g.inv(a)))),
        SplitTarget::Core => g.mul(g.mul(a, g.inv(b)), a),
    };
    for x in 0..n {
        for y in 0..n {
            if rho[q.op(x, y)] != op(rho[x], rho[y]) {
                return Err(Error::NotMorphism(x, y));
            }
        }
    }
    let mut theta = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            theta[x * n + y] = g.mul(rho[x], g.inv(rho[y])) as u32;
        }
    }
    check_group(q, g, &theta)?;
    Ok(GroupCocycle { n, group: g.clone(), theta })
}

/// The congruence `(x,a) ~ (y,b)` iff `x = y` and `b − a ∈ ⟨step⟩` on `Q ×_θ Z_q`.
pub fn fiber_congruence(n: usize, modulus: u64, step: u64) -> Partition {
    let d = gcd(step % modulus, modulus) as usize;
    let q = modulus as usize;
    Partition::from_labels(&(0..n * q).map(|i| (i / q) * d + (i % q) % d).collect::<Vec<_>>())
}
