//! Standard quandle constructions over groups.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::catalog::{self, HeisenbergAuto, P3Kind};
use crate::error::{Error, Result};
use crate::group::{
    self, fixed_subgroup, quotient, subgroup_table, sylow_decomposition, AbelianCoords, Automorphism, GroupTable,
    Subgroup,
};
use crate::partition::Partition;
use crate::perm::PermGroup;
use crate::quandle::{dis, QuandleTable};

/// `x*y = x + f(y - x)` on an abelian group.
pub fn affine(a: &GroupTable, f: &Automorphism) -> Result<QuandleTable> {
    if !a.is_abelian() {
        return Err(Error::NotAbelian);
    }
    principal(a, f)
}

/// Coset quandle on left cosets `xH` (least representatives), together
/// with the representative of each point.
pub fn coset_quandle(g: &GroupTable, h: &Subgroup, f: &Automorphism) -> Result<(QuandleTable, Vec<usize>)> {
    if !h.is_subset_of(&fixed_subgroup(f)) {
        return Err(Error::HNotFixed);
    }
    let n = g.order();
    let hs: Vec<usize> = h.elements().collect();
    // coset id of each element by least representative
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &k in &hs {
                coset[g.mul(x, k)] = id;
            }
        }
    }
    let m = reps.len();
    let mut star = vec![0u32; m * m];
    for (a, &x) in reps.iter().enumerate() {
        let xi = g.inv(x);
        for (b, &y) in reps.iter().enumerate() {
            star[a * m + b] = coset[g.mul(x, f.apply(g.mul(xi, y)))] as u32;
        }
    }
    Ok((QuandleTable::from_star(m, star)?, reps))
}

/// `Q(G, f)`: `x*y = x f(x⁻¹ y)`.
pub fn principal(g: &GroupTable, f: &Automorphism) -> Result<QuandleTable> {
    let n = g.order();
    let mut star = vec![0u32; n * n];
    for x in 0..n {
        let xi = g.inv(x);
        for y in 0..n {
            star[x * n + y] = g.mul(x, f.apply(g.mul(xi, y))) as u32;
        }
    }
    QuandleTable::from_star(n, star)
}

/// `x*y = x f(y x⁻¹)`.
pub fn conj_f(g: &GroupTable, f: &Automorphism) -> Result<QuandleTable> {
    let n = g.order();
    let mut star = vec![0u32; n * n];
    for x in 0..n {
        let xi = g.inv(x);
        for y in 0..n {
            star[x * n + y] = g.mul(x, f.apply(g.mul(y, xi))) as u32;
        }
    }
    QuandleTable::from_star(n, star)
}

pub fn conj(g: &GroupTable) -> Result<QuandleTable> {
    conj_f(g, &Automorphism::identity(g.order()))
}

/// `x*y = x y⁻¹ x`.
pub fn core(g: &GroupTable) -> Result<QuandleTable> {
    let n = g.order();
    QuandleTable::from_fn(n, |x, y| g.mul(g.mul(x, g.inv(y)), x))
}

/// Componentwise operation with `(a, b) ↦ a·|Q2| + b`.
pub fn direct_product(q1: &QuandleTable, q2: &QuandleTable) -> Result<QuandleTable> {
    let m = q2.size();
    QuandleTable::from_fn(q1.size() * m, |x, y| q1.op(x / m, y / m) * m + q2.op(x % m, y % m))
}

pub fn projection(n: usize) -> Result<QuandleTable> {
    QuandleTable::from_fn(n, |_, y| y)
}

/// One Sylow component of a principal quandle over a nilpotent group.
#[derive(Clone, Debug)]
pub struct PComponent {
    pub prime: u64,
    pub group: GroupTable,
    /// Element of the big group for each element of the component.
    pub embedding: Vec<usize>,
    pub quandle: QuandleTable,
}

/// Principal quandles over the Sylow subgroups (primes increasing) and the
/// isomorphism from `Q(G,f)` onto their product (row-major encoding).
pub fn p_components(g: &GroupTable, f: &Automorphism) -> Result<(Vec<PComponent>, Vec<usize>)> {
    let sylows = sylow_decomposition(g)?;
    let mut comps = Vec::new();
    for (p, s) in sylows {
        let (t, emb) = subgroup_table(g, &s);
        let mut pos = vec![usize::MAX; g.order()];
        for (i, &x) in emb.iter().enumerate() {
            pos[x] = i;
        }
        let image: Vec<u32> = emb.iter().map(|&x| pos[f.apply(x)] as u32).collect();
        let fr = Automorphism::new(&t, image)?;
        let quandle = principal(&t, &fr)?;
        comps.push(PComponent { prime: p, group: t, embedding: emb, quandle });
    }
    // every element is uniquely a product of its Sylow parts
    let mut iso = vec![usize::MAX; g.order()];
    let sizes: Vec<usize> = comps.iter().map(|c| c.group.order()).collect();
    let total: usize = sizes.iter().product();
    for code in 0..total {
        let mut rem = code;
        let mut digits = vec![0usize; comps.len()];
        for i in (0..comps.len()).rev() {
            digits[i] = rem % sizes[i];
            rem /= sizes[i];
        }
        let x = comps.iter().zip(&digits).fold(0, |acc, (c, &d)| g.mul(acc, c.embedding[d]));
        iso[x] = code;
    }
    Ok((comps, iso))
}

/// `Q_N = Q(Dis/N, f̂_N)` with its map onto `Q/O_N`.
#[derive(Clone, Debug)]
pub struct QnConstruction {
    pub dis: PermGroup,
    pub dis_table: GroupTable,
    /// `Q(Dis, f̂)` and its map `h ↦ h(x)` onto `Q`.
    pub full: QuandleTable,
    pub full_to_q: Vec<usize>,
    /// Projection `Dis → Dis/N` as a point map `Q(Dis,f̂) → Q_N`.
    pub full_to_qn: Vec<usize>,
    pub qn: QuandleTable,
    pub orbits: Partition,
    pub qn_to_quotient: Vec<usize>,
}

pub fn build_qn(q: &QuandleTable, n: &PermGroup, x: usize, cap: usize) -> Result<QnConstruction> {
    if !q.is_connected() {
        return Err(Error::NotConnected);
    }
    let d = dis(q, cap)?;
    if !n.is_subgroup_of(&d) {
        return Err(Error::NotInDis);
    }
    for y in 0..q.size() {
        let ly = q.left(y);
        let lyi = ly.inverse();
        for (i, s) in n.generators().iter().enumerate() {
            if !n.contains(&ly.compose(s).compose(&lyi).0) {
                return Err(Error::NotNormal(i, y));
            }
        }
    }
    let table = d.to_group_table()?;
    let lx = q.left(x);
    let lxi = lx.inverse();
    let image = (0..d.order())
        .map(|i| Ok(d.index_of(&lx.compose(&d.perm(i)).compose(&lxi).0).ok_or(Error::NotInDis)? as u32))
        .collect::<Result<Vec<u32>>>()?;
    let fhat = Automorphism { image };
    let nsub = Subgroup::from_members(d.elements().map(|h| n.contains(h)).collect());
    let (qt, proj) = quotient(&table, &nsub)?;
    let fn_ = group::induced_automorphism(&fhat, &nsub, &proj)?;
    let full = principal(&table, &fhat)?;
    let qn = principal(&qt, &fn_)?;
    let orbits = n.orbits();
    let full_to_q: Vec<usize> = (0..d.order()).map(|i| d.element(i)[x] as usize).collect();
    let reps = group::coset_reps(&proj);
    let qn_to_quotient = reps.iter().map(|&r| orbits.class_of(full_to_q[r])).collect();
    Ok(QnConstruction {
        dis: d,
        dis_table: table,
        full,
        full_to_q,
        full_to_qn: proj.image.iter().map(|&v| v as usize).collect(),
        qn,
        orbits,
        qn_to_quotient,
    })
}

/// Groups that can be named in specs and on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// `Z_{m1} × ... × Z_{mk}`.
    Abelian { moduli: Vec<u64> },
    Metacyclic { n: u64, m: u64, r: u64 },
    OrderP3 { group: P3Kind, p: u64 },
    Appendix { id: u8, p: u64 },
    Product { a: Box<GroupSpec>, b: Box<GroupSpec> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<(GroupTable, Option<AbelianCoords>)> {
        Ok(match self {
            GroupSpec::Abelian { moduli } => {
                if moduli.is_empty() || moduli.iter().any(|&m| m == 0) {
                    return Err(Error::BadParams("moduli must be positive".into()));
                }
                let (g, c) = group::abelian(moduli);
                (g, Some(c))
            }
            GroupSpec::Metacyclic { n, m, r } => (group::metacyclic(*n, *m, *r)?, None),
            GroupSpec::OrderP3 { group, p } => (catalog::build_order_p3_group(*group, *p)?.table, None),
            GroupSpec::Appendix { id, p } => (catalog::build_appendix_group(*id, *p, None)?.table, None),
            GroupSpec::Product { a, b } => {
                let (ga, _) = a.build()?;
                let (gb, _) = b.build()?;
                (group::direct_product(&ga, &gb), None)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AutoSpec {
    Identity,
    /// `x ↦ x^k`.
    Power { k: i64 },
    /// Integer matrix on abelian coordinates, acting on column vectors.
    Matrix { rows: Vec<Vec<i64>> },
    Heisenberg { map: HeisenbergAuto },
    AppendixFamily { params: Vec<u64> },
    Image { image: Vec<u32> },
}

impl AutoSpec {
    pub fn build(&self, g: &GroupTable, coords: Option<&AbelianCoords>, gspec: &GroupSpec) -> Result<Automorphism> {
        match self {
            AutoSpec::Identity => Ok(Automorphism::identity(g.order())),
            AutoSpec::Power { k } => Automorphism::power_map(g, *k),
            AutoSpec::Matrix { rows } => {
                let c = coords.ok_or(Error::NotAbelian)?;
                let k = c.moduli.len();
                if rows.len() != k || rows.iter().any(|r| r.len() != k) {
                    return Err(Error::BadParams(format!("matrix must be {k}x{k}")));
                }
                Automorphism::new(g, c.matrix_map(rows))
            }
            AutoSpec::Heisenberg { map } => match gspec {
                GroupSpec::OrderP3 { group: P3Kind::Heisenberg, p } => {
                    let he = catalog::build_order_p3_group(P3Kind::Heisenberg, *p)?;
                    catalog::table2_table3_automorphism(&he, map)
                }
                _ => Err(Error::BadParams("heisenberg maps need the heisenberg group".into())),
            },
            AutoSpec::AppendixFamily { params } => match gspec {
                GroupSpec::Appendix { id, p } => {
                    let pg = catalog::build_appendix_group(*id, *p, None)?;
                    let fam = catalog::AutoFamily::new(*id, *p)?;
                    catalog::appendix_automorphism(&pg, &fam, params)
                }
                _ => Err(Error::BadParams("family parameters need an appendix group".into())),
            },
            AutoSpec::Image { image } => Automorphism::new(g, image.clone()),
        }
    }
}

/// A buildable description of a quandle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuandleSpec {
    Affine { group: GroupSpec, auto: AutoSpec },
    Principal { group: GroupSpec, auto: AutoSpec },
    /// Coset quandle over `G/Fix(f)`.
    CosetFix { group: GroupSpec, auto: AutoSpec },
    Conj { group: GroupSpec },
    ConjF { group: GroupSpec, auto: AutoSpec },
    Core { group: GroupSpec },
    Product { a: Box<QuandleSpec>, b: Box<QuandleSpec> },
    Projection { n: usize },
}

impl QuandleSpec {
    pub fn build(&self) -> Result<QuandleTable> {
        let ga = |gs: &GroupSpec, a: &AutoSpec| -> Result<(GroupTable, Automorphism)> {
            let (g, c) = gs.build()?;
            let f = a.build(&g, c.as_ref(), gs)?;
            Ok((g, f))
        };
        match self {
            QuandleSpec::Affine { group, auto } => {
                let (g, f) = ga(group, auto)?;
                affine(&g, &f)
            }
            QuandleSpec::Principal { group, auto } => {
                let (g, f) = ga(group, auto)?;
                principal(&g, &f)
            }
            QuandleSpec::CosetFix { group, auto } => {
                let (g, f) = ga(group, auto)?;
                Ok(coset_quandle(&g, &fixed_subgroup(&f), &f)?.0)
            }
            QuandleSpec::Conj { group } => conj(&group.build()?.0),
            QuandleSpec::ConjF { group, auto } => {
                let (g, f) = ga(group, auto)?;
                conj_f(&g, &f)
            }
            QuandleSpec::Core { group } => core(&group.build()?.0),
            QuandleSpec::Product { a, b } => direct_product(&a.build()?, &b.build()?),
            QuandleSpec::Projection { n } => projection(*n),
        }
    }
}
