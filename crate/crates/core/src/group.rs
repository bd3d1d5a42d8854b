//! Finite groups as multiplication tables.
//!
//! Elements are indices `0..n` with the identity at 0.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith;
use crate::error::{Error, Result};

pub const DEFAULT_TABLE_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.mul[a * self.n..(a + 1) * self.n]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let (mut base, mut e) = if k < 0 { (self.inv(a), k.unsigned_abs()) } else { (a, k as u64) };
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| self.row(a).iter().map(|&x| x as usize).collect()).collect()
    }

    /// Builds a table from a closure and validates it.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        validate_group(&rows)
    }

    /// Table of a quotient or other structure known to be a group with
    /// identity at 0. Only inverses are computed.
    pub(crate) fn from_trusted(n: usize, mul: Vec<u32>) -> Self {
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        GroupTable { n, mul, inv }
    }
}

/// Validates a raw table and relabels so that the identity sits at index 0.
pub fn validate_group(rows: &[Vec<usize>]) -> Result<GroupTable> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Malformed("empty table".into()));
    }
    for (a, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::Malformed(format!("row {a} has length {}", r.len())));
        }
        if let Some(&bad) = r.iter().find(|&&x| x >= n) {
            return Err(Error::Malformed(format!("entry {bad} out of range in row {a}")));
        }
    }
    let mut seen = vec![false; n];
    for a in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for b in 0..n {
            let x = rows[a][b];
            if seen[x] {
                return Err(Error::NotCancellative(a));
            }
            seen[x] = true;
        }
    }
    for b in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for a in 0..n {
            let x = rows[a][b];
            if seen[x] {
                return Err(Error::NotCancellative(b));
            }
            seen[x] = true;
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|y| rows[e][y] == y && rows[y][e] == y))
        .ok_or(Error::NoIdentity)?;
    // swap labels e and 0
    let sigma = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            mul[sigma(a) * n + sigma(b)] = sigma(rows[a][b]) as u32;
        }
    }
    let g = GroupTable::from_trusted(n, mul);
    light_associativity(&g)?;
    Ok(g)
}

/// Light's test: the elements `a` with `(xa)y = x(ay)` for all x, y form a
/// closed subset, so it suffices to check a set whose right-normed
/// products reach every element.
fn light_associativity(g: &GroupTable) -> Result<()> {
    let n = g.order();
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut list = vec![0usize];
    let mut gens = Vec::new();
    for cand in 0..n {
        if reached[cand] {
            continue;
        }
        gens.push(cand);
        // right-normed closure restarted from everything reached so far
        let mut queue: VecDeque<usize> = list.iter().copied().collect();
        if !reached[cand] {
            reached[cand] = true;
            list.push(cand);
            queue.push_back(cand);
        }
        while let Some(x) = queue.pop_front() {
            for &h in &gens {
                let y = g.mul(x, h);
                if !reached[y] {
                    reached[y] = true;
                    list.push(y);
                    queue.push_back(y);
                }
            }
        }
    }
    for &a in &gens {
        for x in 0..n {
            let xa = g.mul(x, a);
            for y in 0..n {
                if g.mul(xa, y) != g.mul(x, g.mul(a, y)) {
                    return Err(Error::NotAssociative(x, a, y));
                }
            }
        }
    }
    Ok(())
}

/// Exhaustive associativity check over all triples.
pub fn is_associative_exhaustive(g: &GroupTable) -> bool {
    let n = g.order();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z)))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<u32>,
    member: Vec<bool>,
}

impl Subgroup {
    pub fn from_members(member: Vec<bool>) -> Self {
        let elements = member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i as u32).collect();
        Subgroup { elements, member }
    }

    pub fn whole(n: usize) -> Self {
        Self::from_members(vec![true; n])
    }

    pub fn trivial(n: usize) -> Self {
        let mut m = vec![false; n];
        m[0] = true;
        Self::from_members(m)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.member.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements.iter().map(|&x| x as usize)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements().all(|x| other.contains(x))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_members(self.member.iter().zip(&other.member).map(|(&a, &b)| a && b).collect())
    }
}

/// Smallest subgroup containing `gens`.
pub fn subgroup_closure(g: &GroupTable, gens: &[usize]) -> Subgroup {
    let n = g.order();
    let mut member = vec![false; n];
    member[0] = true;
    let gens: Vec<usize> = gens.iter().copied().filter(|&x| x != 0).collect();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &h in &gens {
            let y = g.mul(x, h);
            if !member[y] {
                member[y] = true;
                queue.push_back(y);
            }
        }
    }
    Subgroup::from_members(member)
}

pub fn center(g: &GroupTable) -> Subgroup {
    let n = g.order();
    Subgroup::from_members((0..n).map(|a| (0..n).all(|b| g.mul(a, b) == g.mul(b, a))).collect())
}

/// `[H, K]`, generated by all commutators `[h, k]`.
pub fn commutator_subgroup(g: &GroupTable, h: &Subgroup, k: &Subgroup) -> Subgroup {
    let n = g.order();
    let mut hit = vec![false; n];
    for a in h.elements() {
        for b in k.elements() {
            hit[g.commutator(a, b)] = true;
        }
    }
    let gens: Vec<usize> = (0..n).filter(|&x| hit[x]).collect();
    subgroup_closure(g, &gens)
}

pub fn derived_subgroup(g: &GroupTable) -> Subgroup {
    let all = Subgroup::whole(g.order());
    commutator_subgroup(g, &all, &all)
}

/// `γ_k(G)` with `γ_0 = G` and `γ_1` the derived subgroup.
pub fn lower_central(g: &GroupTable, k: usize) -> Subgroup {
    let all = Subgroup::whole(g.order());
    let mut cur = all.clone();
    for _ in 0..k {
        cur = commutator_subgroup(g, &cur, &all);
    }
    cur
}

pub fn is_nilpotent(g: &GroupTable) -> bool {
    let all = Subgroup::whole(g.order());
    let mut cur = all.clone();
    loop {
        if cur.is_trivial() {
            return true;
        }
        let next = commutator_subgroup(g, &cur, &all);
        if next.order() == cur.order() {
            return false;
        }
        cur = next;
    }
}

/// Frattini subgroup of a p-group, as the closure of `γ_1(G)` and all p-th powers.
pub fn frattini(g: &GroupTable) -> Result<Subgroup> {
    let n = g.order();
    if n == 1 {
        return Ok(Subgroup::trivial(1));
    }
    let (p, _) = arith::prime_power(n as u64).ok_or(Error::NotPGroup(n))?;
    let d = derived_subgroup(g);
    let mut gens: Vec<usize> = d.elements().collect();
    gens.extend((0..n).map(|x| g.pow(x, p as i64)));
    gens.sort_unstable();
    gens.dedup();
    Ok(subgroup_closure(g, &gens))
}

pub fn is_normal(g: &GroupTable, h: &Subgroup) -> Result<()> {
    for x in 0..g.order() {
        for a in h.elements() {
            if !h.contains(g.conj(x, a)) {
                return Err(Error::NotNormal(a, x));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub image: Vec<u32>,
    pub target_order: usize,
}

impl GroupHom {
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    pub fn is_homomorphism(&self, src: &GroupTable, dst: &GroupTable) -> bool {
        let n = src.order();
        self.image.len() == n
            && (0..n).all(|a| (0..n).all(|b| self.apply(src.mul(a, b)) == dst.mul(self.apply(a), self.apply(b))))
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_members(self.image.iter().map(|&x| x == 0).collect())
    }
}

/// Quotient by a normal subgroup; cosets are listed by their minimal element.
pub fn quotient(g: &GroupTable, h: &Subgroup) -> Result<(GroupTable, GroupHom)> {
    is_normal(g, h)?;
    let n = g.order();
    let mut coset = vec![u32::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for a in h.elements() {
            coset[g.mul(x, a)] = id;
        }
    }
    let m = reps.len();
    let mut mul = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            mul[i * m + j] = coset[g.mul(reps[i], reps[j])];
        }
    }
    Ok((GroupTable::from_trusted(m, mul), GroupHom { image: coset, target_order: m }))
}

/// Minimal coset representatives of a quotient map, indexed by coset.
pub fn coset_reps(proj: &GroupHom) -> Vec<usize> {
    let mut reps = vec![usize::MAX; proj.target_order];
    for (x, &c) in proj.image.iter().enumerate() {
        if reps[c as usize] == usize::MAX {
            reps[c as usize] = x;
        }
    }
    reps
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub image: Vec<u32>,
}

impl Automorphism {
    /// Validates bijectivity and the multiplication law on all pairs.
    pub fn new(g: &GroupTable, image: Vec<u32>) -> Result<Self> {
        let n = g.order();
        if image.len() != n {
            return Err(Error::NotAutomorphism("wrong length".into()));
        }
        let mut seen = vec![false; n];
        for &x in &image {
            if x as usize >= n || seen[x as usize] {
                return Err(Error::NotAutomorphism("not a bijection".into()));
            }
            seen[x as usize] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if image[g.mul(a, b)] as usize != g.mul(image[a] as usize, image[b] as usize) {
                    return Err(Error::NotAutomorphism(format!("law fails at ({a},{b})")));
                }
            }
        }
        Ok(Automorphism { image })
    }

    pub fn identity(n: usize) -> Self {
        Automorphism { image: (0..n as u32).collect() }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { image: other.image.iter().map(|&x| self.image[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0u32; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Automorphism { image: inv }
    }

    pub fn pow(&self, k: usize) -> Automorphism {
        let mut acc = Automorphism::identity(self.image.len());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Inner automorphism `x ↦ g x g⁻¹`.
    pub fn inner(g: &GroupTable, a: usize) -> Self {
        Automorphism { image: (0..g.order()).map(|x| g.conj(a, x) as u32).collect() }
    }

    /// The power map `x ↦ x^k`, validated (an automorphism for abelian
    /// groups when k is prime to the exponent).
    pub fn power_map(g: &GroupTable, k: i64) -> Result<Self> {
        Automorphism::new(g, (0..g.order()).map(|x| g.pow(x, k) as u32).collect())
    }
}

pub fn fixed_subgroup(f: &Automorphism) -> Subgroup {
    Subgroup::from_members(f.image.iter().enumerate().map(|(x, &y)| x == y as usize).collect())
}

/// The automorphism of `G/N` induced by `f`, given the projection from [`quotient`].
pub fn induced_automorphism(f: &Automorphism, h: &Subgroup, proj: &GroupHom) -> Result<Automorphism> {
    if h.elements().any(|x| !h.contains(f.apply(x))) {
        return Err(Error::NotInvariant);
    }
    let reps = coset_reps(proj);
    Ok(Automorphism { image: reps.iter().map(|&r| proj.image[f.apply(r)]).collect() })
}

/// For nilpotent G, the Sylow subgroups as (prime, subgroup), primes increasing.
pub fn sylow_decomposition(g: &GroupTable) -> Result<Vec<(u64, Subgroup)>> {
    if !is_nilpotent(g) {
        return Err(Error::NotNilpotent);
    }
    let n = g.order();
    let orders: Vec<usize> = (0..n).map(|x| g.element_order(x)).collect();
    Ok(arith::factorize(n as u64)
        .into_iter()
        .map(|(p, _)| {
            let member = orders.iter().map(|&o| arith::prime_power(o as u64).map_or(o == 1, |(q, _)| q == p)).collect();
            (p, Subgroup::from_members(member))
        })
        .collect())
}

/// Greedy generating set, preferring elements of large order.
pub fn generating_set(g: &GroupTable) -> Vec<usize> {
    let n = g.order();
    let mut elems: Vec<usize> = (1..n).collect();
    let orders: Vec<usize> = (0..n).map(|x| g.element_order(x)).collect();
    elems.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));
    let mut gens = Vec::new();
    let mut cur = Subgroup::trivial(n);
    for x in elems {
        if cur.order() == n {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = subgroup_closure(g, &gens);
        }
    }
    gens
}

/// Backtracking search for injective homomorphisms `src → dst` defined by
/// images of `gens`; `visit` returns false to stop.
fn hom_search(
    src: &GroupTable,
    dst: &GroupTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    visit: &mut dyn FnMut(&[u32]) -> bool,
) {
    let n = src.order();
    let mut img = vec![u32::MAX; n];
    let mut used = vec![false; dst.order()];
    img[0] = 0;
    used[0] = true;
    let mut defined = vec![0usize];
    let mut chosen = vec![0usize; gens.len()];
    rec(src, dst, gens, candidates, 0, &mut img, &mut used, &mut defined, &mut chosen, visit);

    #[allow(clippy::too_many_arguments)]
    fn rec(
        src: &GroupTable,
        dst: &GroupTable,
        gens: &[usize],
        cands: &[Vec<usize>],
        i: usize,
        img: &mut Vec<u32>,
        used: &mut Vec<bool>,
        defined: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if i == gens.len() {
            if defined.len() == src.order() {
                return visit(img);
            }
            return true;
        }
        let g = gens[i];
        for &c in &cands[i] {
            let mark = defined.len();
            chosen[i] = c;
            let ok = extend(src, dst, gens, chosen, i, img, used, defined, g, c);
            if ok && !rec(src, dst, gens, cands, i + 1, img, used, defined, chosen, visit) {
                return false;
            }
            for &x in &defined[mark..] {
                used[img[x] as usize] = false;
                img[x] = u32::MAX;
            }
            defined.truncate(mark);
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        src: &GroupTable,
        dst: &GroupTable,
        gens: &[usize],
        chosen: &[usize],
        i: usize,
        img: &mut [u32],
        used: &mut [bool],
        defined: &mut Vec<usize>,
        g: usize,
        c: usize,
    ) -> bool {
        if img[g] != u32::MAX {
            return img[g] as usize == c;
        }
        if used[c] {
            return false;
        }
        img[g] = c as u32;
        used[c] = true;
        defined.push(g);
        // every defined element times every chosen generator
        let mut head = 0;
        while head < defined.len() {
            let x = defined[head];
            head += 1;
            for j in 0..=i {
                let y = src.mul(x, gens[j]);
                let want = dst.mul(img[x] as usize, chosen[j]) as u32;
                if img[y] == u32::MAX {
                    if used[want as usize] {
                        return false;
                    }
                    img[y] = want;
                    used[want as usize] = true;
                    defined.push(y);
                } else if img[y] != want {
                    return false;
                }
            }
        }
        true
    }
}

/// All automorphisms, found by backtracking on the images of `gens`.
pub fn all_automorphisms(g: &GroupTable, gens: &[usize], cap: usize) -> Result<Vec<Automorphism>> {
    let n = g.order();
    if n > DEFAULT_TABLE_LIMIT {
        return Err(Error::TooLarge(n, DEFAULT_TABLE_LIMIT));
    }
    if subgroup_closure(g, gens).order() != n {
        return Err(Error::NotGenerating);
    }
    let orders: Vec<usize> = (0..n).map(|x| g.element_order(x)).collect();
    let cands: Vec<Vec<usize>> = gens.iter().map(|&a| (0..n).filter(|&x| orders[x] == orders[a]).collect()).collect();
    let mut out = Vec::new();
    let mut over = false;
    hom_search(g, g, gens, &cands, &mut |img| {
        if out.len() == cap {
            over = true;
            return false;
        }
        out.push(Automorphism { image: img.to_vec() });
        true
    });
    if over {
        return Err(Error::CapExceeded(cap));
    }
    Ok(out)
}

pub fn group_isomorphic(a: &GroupTable, b: &GroupTable) -> Option<GroupHom> {
    if a.order() != b.order() || a.order_profile() != b.order_profile() {
        return None;
    }
    if a.is_abelian() != b.is_abelian() || center(a).order() != center(b).order() {
        return None;
    }
    let gens = generating_set(a);
    let ob: Vec<usize> = (0..b.order()).map(|x| b.element_order(x)).collect();
    let cands: Vec<Vec<usize>> =
        gens.iter().map(|&x| (0..b.order()).filter(|&y| ob[y] == a.element_order(x)).collect()).collect();
    let mut found = None;
    hom_search(a, b, &gens, &cands, &mut |img| {
        found = Some(GroupHom { image: img.to_vec(), target_order: b.order() });
        false
    });
    found
}

pub fn radical(n: u64) -> u64 {
    arith::radical(n)
}

/// Mixed-radix coordinates of a product of cyclic groups; the first
/// coordinate is the most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCoords {
    pub moduli: Vec<u64>,
}

impl AbelianCoords {
    pub fn order(&self) -> usize {
        self.moduli.iter().product::<u64>() as usize
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        let mut x = 0u64;
        for (c, m) in v.iter().zip(&self.moduli) {
            x = x * m + c % m;
        }
        x as usize
    }

    pub fn decode(&self, mut x: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            let m = self.moduli[i] as usize;
            v[i] = (x % m) as u64;
            x /= m;
        }
        v
    }

    /// The endomorphism `x ↦ M x` on column vectors, with integer entries.
    pub fn matrix_map(&self, m: &[Vec<i64>]) -> Vec<u32> {
        (0..self.order())
            .map(|x| {
                let v = self.decode(x);
                let w: Vec<u64> = (0..self.moduli.len())
                    .map(|i| {
                        let s: i64 = m[i].iter().zip(&v).map(|(&a, &b)| a * b as i64).sum();
                        arith::modp(s, self.moduli[i])
                    })
                    .collect();
                self.encode(&w) as u32
            })
            .collect()
    }
}

/// `Z_{m1} × ... × Z_{mk}` with row-major coordinates.
pub fn abelian(moduli: &[u64]) -> (GroupTable, AbelianCoords) {
    let c = AbelianCoords { moduli: moduli.to_vec() };
    let n = c.order();
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        let va = c.decode(a);
        for b in 0..n {
            let vb = c.decode(b);
            let s: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
            mul[a * n + b] = c.encode(&s) as u32;
        }
    }
    (GroupTable::from_trusted(n, mul), c)
}

pub fn cyclic(n: u64) -> GroupTable {
    abelian(&[n]).0
}

/// Direct product with row-major encoding `(a, b) ↦ a·|H| + b`.
pub fn direct_product(g: &GroupTable, h: &GroupTable) -> GroupTable {
    let (n, m) = (g.order(), h.order());
    let mut mul = vec![0u32; n * m * n * m];
    let nm = n * m;
    for a in 0..nm {
        for b in 0..nm {
            mul[a * nm + b] = (g.mul(a / m, b / m) * m + h.mul(a % m, b % m)) as u32;
        }
    }
    GroupTable::from_trusted(nm, mul)
}

/// Group table of a subgroup, relabeled in increasing element order.
pub fn subgroup_table(g: &GroupTable, h: &Subgroup) -> (GroupTable, Vec<usize>) {
    let elems: Vec<usize> = h.elements().collect();
    let mut pos = vec![u32::MAX; g.order()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i as u32;
    }
    let m = elems.len();
    let mut mul = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            mul[i * m + j] = pos[g.mul(elems[i], elems[j])];
        }
    }
    (GroupTable::from_trusted(m, mul), elems)
}


/// `Z_n ⋊ Z_m` with the generator of `Z_m` acting as multiplication by `r`
/// (requires `r^m ≡ 1 mod n`); element `(a, b)` has index `b·n + a`.
pub fn metacyclic(n: u64, m: u64, r: u64) -> Result<GroupTable> {
    if arith::pow_mod(r, m, n) != 1 % n {
        return Err(Error::BadParams(format!("{r}^{m} is not 1 mod {n}")));
    }
    let (nu, mu) = (n as usize, m as usize);
    let rpow: Vec<u64> = (0..m).map(|b| arith::pow_mod(r, b, n)).collect();
    GroupTable::from_fn(nu * mu, |x, y| {
        let (a, b) = (x % nu, x / nu);
        let (c, d) = (y % nu, y / nu);
        let e = (a as u64 + rpow[b] * c as u64) % n;
        ((b + d) % mu) * nu + e as usize
    })
}
