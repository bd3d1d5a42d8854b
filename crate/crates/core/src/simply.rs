//! Deciding simple connectedness: the H² criterion, an explicit search for
//! connected covers over the p-group catalog, the reduction to Sylow
//! components, closed forms for cores, and the family classifiers.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::catalog::{build_appendix_group, build_order_p3_group, AutoFamily, GoodChecker, GoodOutcome, P3Kind, PcGroup};
use crate::cohomology::{cocycle_space_with, SolverOptions};
use crate::construct::{self, p_components, principal, GroupSpec};
use crate::error::{Error, Result};
use crate::families::{self, FamilyMember, FamilyTable};
use crate::group::{
    center, cyclic, derived_subgroup, fixed_subgroup, group_isomorphic, induced_automorphism, is_nilpotent, quotient,
    Automorphism, GroupTable,
};
use crate::iso::quandle_isomorphic;
use crate::partition::Partition;
use crate::perm::{Perm, PermGroup, DEFAULT_PERMGROUP_CAP};
use crate::quandle::{dis, dis_ker, dis_rel, quotient_quandle, QuandleTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SimplyConnected,
    Not,
    Undecided,
}

impl Verdict {
    pub fn from_bool(simply: bool) -> Self {
        if simply {
            Verdict::SimplyConnected
        } else {
            Verdict::Not
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    H2,
    Covers,
    ClosedForm,
    NilpotentReduction,
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A non-identity displacement fixing `point`: the quandle is not principal.
    NotPrincipal { point: usize, displacement: Vec<u32> },
    /// A cocycle whose class in `H²(Q, Z_prime)` is nonzero.
    Cocycle { prime: u64, rows: Vec<Vec<u64>> },
    /// The connected cover `Q(G', f')` with its projection onto the input.
    Cover {
        group: GroupSpec,
        /// Family parameters, or the images of the free generators for
        /// generically enumerated automorphisms.
        params: Vec<u64>,
        auto: Vec<u32>,
        fix_order: usize,
        cover_size: usize,
        projection: Vec<usize>,
    },
    /// The Sylow component that fails.
    Component { prime: u64, size: usize, verdict: Box<SCVerdict> },
    Reason { text: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SCVerdict {
    pub verdict: Verdict,
    pub method: Method,
    /// Primes at which `H²` was computed (empty for other methods).
    pub primes: Vec<u64>,
    pub witness: Option<Witness>,
}

impl SCVerdict {
    fn new(verdict: Verdict, method: Method) -> Self {
        SCVerdict { verdict, method, primes: Vec::new(), witness: None }
    }

    fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    fn reason(verdict: Verdict, method: Method, text: impl Into<String>) -> Self {
        SCVerdict::new(verdict, method).with_witness(Witness::Reason { text: text.into() })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    pub solver: SolverOptions,
    pub perm_cap: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { solver: SolverOptions::default(), perm_cap: DEFAULT_PERMGROUP_CAP }
    }
}

/// Primes that bound the possible cover sizes, when the theory provides a bound.
fn auto_primes(q: &QuandleTable, d: &PermGroup) -> Result<Option<Vec<u64>>> {
    let n = q.size() as u64;
    if let Some((p, _)) = arith::prime_power(n) {
        return Ok(Some(vec![p]));
    }
    if d.order() == q.size() && is_nilpotent(&d.to_group_table()?) {
        return Ok(Some(arith::factorize(n).into_iter().map(|(p, _)| p).collect()));
    }
    Ok(None)
}

/// Simple connectedness through principality and `H²(Q, Z_p)`.
///
/// With `primes = None` the prime set is derived from `|Q|`, which is
/// possible for prime-power sizes and principal quandles over nilpotent
/// groups. Explicit primes that do not cover that set give `Undecided`
/// when every computed `H²` vanishes.
pub fn decide_h2(q: &QuandleTable, primes: Option<&[u64]>, opts: &DecideOptions) -> Result<SCVerdict> {
    if !q.flags().is_quandle || !q.is_connected() {
        return Err(Error::NotConnected);
    }
    if let Some(list) = primes {
        if let Some(&bad) = list.iter().find(|&&p| !arith::is_prime(p)) {
            return Err(Error::BadParams(format!("{bad} is not prime")));
        }
    }
    let d = dis(q, opts.perm_cap)?;
    if d.order() != q.size() {
        let h = d
            .elements()
            .find(|h| h[0] == 0 && h.iter().enumerate().any(|(i, &v)| v as usize != i))
            .expect("a transitive group larger than its degree has nontrivial stabilizers");
        return Ok(SCVerdict::new(Verdict::Not, Method::H2)
            .with_witness(Witness::NotPrincipal { point: 0, displacement: h.to_vec() }));
    }
    let auto = auto_primes(q, &d)?;
    let list: Vec<u64> = match (primes, &auto) {
        (Some(l), _) => l.to_vec(),
        (None, Some(a)) => a.clone(),
        (None, None) => return Err(Error::PrimesUnbounded),
    };
    let mut out = SCVerdict::new(Verdict::SimplyConnected, Method::H2);
    for &p in &list {
        out.primes.push(p);
        let space = cocycle_space_with(q, p, opts.solver)?;
        if let Some(t) = space.h2_basis.first() {
            out.verdict = Verdict::Not;
            out.witness = Some(Witness::Cocycle { prime: p, rows: t.rows() });
            return Ok(out);
        }
    }
    let covered = auto.map(|a| a.iter().all(|p| list.contains(p))).unwrap_or(false);
    if !covered {
        out.verdict = Verdict::Undecided;
    }
    Ok(out)
}

/// Reduction to Sylow components for `Q(G, f)` with `G` nilpotent.
pub fn decide_nilpotent(g: &GroupTable, f: &Automorphism, opts: &DecideOptions) -> Result<SCVerdict> {
    if !is_nilpotent(g) {
        return Err(Error::NotNilpotent);
    }
    let q = principal(g, f)?;
    if !q.is_connected() {
        return Err(Error::NotConnected);
    }
    let (comps, _) = p_components(g, f)?;
    let mut out = SCVerdict::new(Verdict::SimplyConnected, Method::NilpotentReduction);
    for c in comps {
        let v = decide_h2(&c.quandle, Some(&[c.prime]), opts)?;
        out.primes.push(c.prime);
        if v.verdict != Verdict::SimplyConnected {
            out.verdict = v.verdict;
            out.witness = Some(Witness::Component { prime: c.prime, size: c.group.order(), verdict: Box::new(v) });
            return Ok(out);
        }
    }
    Ok(out)
}

/// Candidate cover groups with the automorphisms to try, in search order.
enum Candidates {
    /// Every automorphism of an order-p³ group.
    Generic { kind: P3Kind },
    /// A parametrized family on an order-p⁴ group.
    Family { id: u8 },
}

/// Tuples of a family in lexicographic order (first parameter most significant).
fn lex_tuple(fam: &AutoFamily, mut code: u64) -> Vec<u64> {
    let mut t = vec![0u64; fam.params.len()];
    for (i, s) in fam.params.iter().enumerate().rev() {
        t[i] = code % s.range;
        code /= s.range;
    }
    t
}

struct CoverSearch<'a> {
    q: &'a QuandleTable,
    g: &'a GroupTable,
    f_cycles: Vec<usize>,
    /// Induced maps already found not to give `Q`, per fixed subgroup.
    rejected: HashSet<(Vec<bool>, Vec<u32>)>,
    /// Fixed subgroups whose quotient is not isomorphic to `G`.
    wrong_quotient: HashSet<Vec<bool>>,
    right_quotient: HashSet<Vec<bool>>,
}

impl CoverSearch<'_> {
    /// Point map `Q(G', f') → Q` if the quotient by `Fix(f')` is isomorphic to `Q`.
    fn try_cover(&mut self, gp: &GroupTable, fp: &Automorphism) -> Result<Option<(Vec<usize>, usize)>> {
        let fix = fixed_subgroup(fp);
        let key: Vec<bool> = (0..gp.order()).map(|x| fix.contains(x)).collect();
        if self.wrong_quotient.contains(&key) {
            return Ok(None);
        }
        let (qt, proj) = quotient(gp, &fix)?;
        if !self.right_quotient.contains(&key) {
            if group_isomorphic(&qt, self.g).is_none() {
                self.wrong_quotient.insert(key);
                return Ok(None);
            }
            self.right_quotient.insert(key.clone());
        }
        let ff = induced_automorphism(fp, &fix, &proj)?;
        let perm = Perm(ff.image.clone());
        if perm.cycle_type() != self.f_cycles {
            return Ok(None);
        }
        let rkey = (key, ff.image.clone());
        if self.rejected.contains(&rkey) {
            return Ok(None);
        }
        let small = principal(&qt, &ff)?;
        match quandle_isomorphic(&small, self.q) {
            Some(iso) => {
                let projection = (0..gp.order()).map(|x| iso[proj.image[x] as usize]).collect();
                Ok(Some((projection, fix.order())))
            }
            None => {
                self.rejected.insert(rkey);
                Ok(None)
            }
        }
    }
}

/// Searches the p-group catalog for a connected cover of `Q(G, f)` of size
/// `p·|G|`, for `|G| = p²` or `p³`. Exhausting the search means simply connected.
pub fn decide_covers(g: &GroupTable, f: &Automorphism, opts: &DecideOptions) -> Result<SCVerdict> {
    let n = g.order() as u64;
    let (p, k) = arith::prime_power(n).ok_or_else(|| Error::UnsupportedSize(format!("{n} is not a prime power")))?;
    if p == 2 {
        return Err(Error::BadPrime(p));
    }
    let cands: Vec<Candidates> = match k {
        2 => vec![Candidates::Generic { kind: P3Kind::Heisenberg }, Candidates::Generic { kind: P3Kind::Modular }],
        3 => [3u8, 7, 12, 13].iter().map(|&id| Candidates::Family { id }).collect(),
        _ => return Err(Error::UnsupportedSize(format!("order {n}, expected p² or p³"))),
    };
    let q = principal(g, f)?;
    if !q.is_connected() {
        return Err(Error::NotConnected);
    }
    let mut search = CoverSearch {
        q: &q,
        g,
        f_cycles: Perm(f.image.clone()).cycle_type(),
        rejected: HashSet::new(),
        wrong_quotient: HashSet::new(),
        right_quotient: HashSet::new(),
    };
    let cover = |spec: GroupSpec, params: Vec<u64>, fp: &Automorphism, fix_order: usize, projection: Vec<usize>| {
        SCVerdict::new(Verdict::Not, Method::Covers).with_witness(Witness::Cover {
            group: spec,
            params,
            auto: fp.image.clone(),
            fix_order,
            cover_size: projection.len(),
            projection,
        })
    };
    for c in cands {
        match c {
            Candidates::Generic { kind } => {
                let pc = build_order_p3_group(kind, p)?;
                let checker = GoodChecker::new(&pc)?;
                let gens = [pc.gen(0), pc.gen(1)];
                for fp in crate::group::all_automorphisms(&pc.table, &gens, opts.perm_cap)? {
                    let free = [fp.apply(gens[0]), fp.apply(gens[1])];
                    if checker.check(&free) != GoodOutcome::Good {
                        continue;
                    }
                    if let Some((proj, fo)) = search.try_cover(&pc.table, &fp)? {
                        let spec = GroupSpec::OrderP3 { group: kind, p };
                        return Ok(cover(spec, free.iter().map(|&x| x as u64).collect(), &fp, fo, proj));
                    }
                }
            }
            Candidates::Family { id } => {
                let pc = build_appendix_group(id, p, None)?;
                if !quotient_can_match(&pc, g)? {
                    continue;
                }
                let fam = AutoFamily::new(id, p)?;
                let checker = GoodChecker::new(&pc)?;
                for code in 0..fam.raw_count() {
                    let t = lex_tuple(&fam, code);
                    if !fam.admissible(&t) {
                        continue;
                    }
                    let free: Vec<usize> = fam.images(&t).iter().map(|w| pc.eval_word(w)).collect();
                    if checker.check(&free) != GoodOutcome::Good {
                        continue;
                    }
                    let fp = pc.automorphism_from_free(&free)?;
                    if let Some((proj, fo)) = search.try_cover(&pc.table, &fp)? {
                        return Ok(cover(GroupSpec::Appendix { id, p }, t, &fp, fo, proj));
                    }
                }
            }
        }
    }
    Ok(SCVerdict::new(Verdict::SimplyConnected, Method::Covers))
}

/// `(good)` forces `Fix(f') = Z(G') ∩ γ_1(G')` when that subgroup has order p;
/// then one quotient decides whether the group can cover `G` at all.
fn quotient_can_match(pc: &PcGroup, g: &GroupTable) -> Result<bool> {
    let zg = center(&pc.table).intersect(&derived_subgroup(&pc.table));
    if zg.order() as u64 != pc.prime() {
        return Ok(true);
    }
    let (qt, _) = quotient(&pc.table, &zg)?;
    Ok(group_isomorphic(&qt, g).is_some())
}

/// Checks a cover witness against `Q`: connected, of size `p·|Q|`, with a
/// surjective projection whose kernel lies in the Cayley kernel.
pub fn validate_cover_witness(q: &QuandleTable, w: &Witness) -> Result<()> {
    let fail = |m: &str| Err(Error::PreconditionFailed(format!("cover witness: {m}")));
    let Witness::Cover { group, auto, cover_size, projection, .. } = w else {
        return fail("not a cover");
    };
    let (gt, _) = group.build()?;
    let fp = Automorphism::new(&gt, auto.clone())?;
    let e = principal(&gt, &fp)?;
    let n = q.size() as u64;
    let Some((p, _)) = arith::prime_power(n) else {
        return fail("input size is not a prime power");
    };
    if e.size() != *cover_size || e.size() as u64 != p * n || projection.len() != e.size() {
        return fail("wrong size");
    }
    if !e.is_connected() {
        return fail("cover is not connected");
    }
    if e.is_hom_to(q, projection).is_some() {
        return fail("projection is not a homomorphism");
    }
    let mut hit = vec![false; q.size()];
    for &y in projection {
        hit[y] = true;
    }
    if hit.iter().any(|h| !h) {
        return fail("projection is not onto");
    }
    if !Partition::from_labels(projection).refines(&e.cayley_kernel()) {
        return fail("kernel is not below the Cayley kernel");
    }
    if arith::radical(e.size() as u64) != arith::radical(n) {
        return fail("radicals differ");
    }
    Ok(())
}

fn is_cyclic(g: &GroupTable) -> bool {
    (0..g.order()).any(|x| g.element_order(x) == g.order())
}

/// `Core(G)` is simply connected exactly for cyclic groups of odd order.
pub fn decide_core(g: &GroupTable) -> SCVerdict {
    let n = g.order();
    if n % 2 == 0 {
        SCVerdict::reason(Verdict::Not, Method::ClosedForm, format!("order {n} is even"))
    } else if !is_cyclic(g) {
        SCVerdict::reason(Verdict::Not, Method::ClosedForm, "group is not cyclic")
    } else {
        SCVerdict::new(Verdict::SimplyConnected, Method::ClosedForm)
    }
}

/// Computes the verdict for `Core(G)` directly: via the Sylow reduction for
/// abelian `G` (where `Core(G) = Q(G, x ↦ x⁻¹)`) and via `H²` otherwise.
pub fn decide_core_computed(g: &GroupTable, opts: &DecideOptions) -> Result<SCVerdict> {
    let q = construct::core(g)?;
    if !q.is_connected() {
        return Ok(SCVerdict::reason(Verdict::Not, Method::ClosedForm, "not connected"));
    }
    if g.is_abelian() {
        return decide_nilpotent(g, &Automorphism::power_map(g, -1)?, opts);
    }
    match decide_h2(&q, None, opts) {
        Err(Error::PrimesUnbounded) => {
            let primes: Vec<u64> = arith::factorize(g.order() as u64).into_iter().map(|(p, _)| p).collect();
            decide_h2(&q, Some(&primes), opts)
        }
        r => r,
    }
}

/// Nilpotent latin involutory quandles are simply connected exactly when
/// isomorphic to `Core(Z_m)` with `m` odd.
pub fn decide_involutory_nilpotent_latin(q: &QuandleTable, opts: &DecideOptions) -> Result<SCVerdict> {
    let fl = q.flags();
    if !fl.is_quandle {
        return Err(Error::PreconditionFailed("not a quandle".into()));
    }
    if !fl.is_involutory {
        return Err(Error::PreconditionFailed("not involutory".into()));
    }
    if !fl.is_latin {
        return Err(Error::PreconditionFailed("not latin".into()));
    }
    if !is_nilpotent(&dis(q, opts.perm_cap)?.to_group_table()?) {
        return Err(Error::PreconditionFailed("not nilpotent".into()));
    }
    let m = q.size();
    if m % 2 == 0 {
        return Ok(SCVerdict::reason(Verdict::Not, Method::ClosedForm, format!("size {m} is even")));
    }
    let model = construct::core(&cyclic(m as u64))?;
    Ok(if quandle_isomorphic(q, &model).is_some() {
        SCVerdict::new(Verdict::SimplyConnected, Method::ClosedForm)
    } else {
        SCVerdict::reason(Verdict::Not, Method::ClosedForm, format!("not isomorphic to Core(Z{m})"))
    })
}

/// What held for one congruence in [`quotient_checks`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub quotient_size: usize,
    pub quotient_verdict: Verdict,
    /// `α` equals the orbit partition of the displacements generated by α-related pairs.
    pub orbits_match: Option<bool>,
    /// The two relative displacement groups coincide.
    pub groups_match: Option<bool>,
    /// Latin and simply connected `Q` has a simply connected quotient.
    pub factor_simply: Option<bool>,
    pub violations: Vec<String>,
}

/// Checks the consequences of a simply connected quotient `Q/α`, and for
/// latin simply connected `Q` that the quotient is simply connected.
pub fn quotient_checks(q: &QuandleTable, alpha: &Partition, opts: &DecideOptions) -> Result<QuotientReport> {
    if !q.is_connected() {
        return Err(Error::NotConnected);
    }
    let (qa, _) = quotient_quandle(q, alpha)?;
    let undecided = |e: Error| match e {
        Error::PrimesUnbounded => Ok(Verdict::Undecided),
        e => Err(e),
    };
    let quotient_verdict = decide_h2(&qa, None, opts).map(|v| v.verdict).or_else(undecided)?;
    let mut rep = QuotientReport {
        quotient_size: qa.size(),
        quotient_verdict,
        orbits_match: None,
        groups_match: None,
        factor_simply: None,
        violations: Vec::new(),
    };
    if quotient_verdict == Verdict::SimplyConnected {
        let rel = dis_rel(q, alpha, opts.perm_cap)?;
        let ker = dis_ker(q, alpha, opts.perm_cap)?;
        let om = rel.orbits() == *alpha;
        let gm = rel.same_elements(&ker);
        if !om {
            rep.violations.push("alpha differs from the orbits of its displacement group".into());
        }
        if !gm {
            rep.violations.push("relative displacement groups differ".into());
        }
        rep.orbits_match = Some(om);
        rep.groups_match = Some(gm);
    }
    if q.flags().is_latin {
        let v = decide_h2(q, None, opts).map(|v| v.verdict).or_else(undecided)?;
        if v == Verdict::SimplyConnected {
            let ok = quotient_verdict == Verdict::SimplyConnected;
            if !ok {
                rep.violations.push("quotient of a simply connected latin quandle is not simply connected".into());
            }
            rep.factor_simply = Some(ok);
        }
    }
    Ok(rep)
}

/// `[Dis, Dis]` and `[[Dis, Dis], Dis]` coincide.
pub fn lower_central_stable(q: &QuandleTable, cap: usize) -> Result<bool> {
    let d = dis(q, cap)?;
    let g1 = d.derived_subgroup(cap)?;
    let mut comms = Vec::new();
    for h in g1.generators() {
        for x in d.generators() {
            comms.push(h.inverse().compose(&x.inverse()).compose(h).compose(x));
        }
    }
    let g2 = d.normal_closure(&comms, cap)?;
    Ok(g1.same_elements(&g2))
}

/// One line of a classification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub table: FamilyTable,
    pub family: String,
    pub params: Vec<u64>,
    pub predicted: Verdict,
    pub computed: Verdict,
    pub method: Method,
    pub witness: Option<Witness>,
    /// Verdict of the cover search, when it was run.
    pub covers: Option<Verdict>,
    pub agree: bool,
}

/// Decides one family member by `H²`, optionally cross-checked by the cover search.
pub fn classify_member(m: &FamilyMember, with_covers: bool, opts: &DecideOptions) -> Result<ClassificationRow> {
    let q = m.spec.build()?;
    let v = decide_h2(&q, None, opts)?;
    let predicted = Verdict::from_bool(m.predicted);
    let covers = if with_covers {
        let (g, f) = group_and_auto(m)?;
        let c = decide_covers(&g, &f, opts)?;
        if let Some(w @ Witness::Cover { .. }) = &c.witness {
            validate_cover_witness(&q, w)?;
        }
        Some(c.verdict)
    } else {
        None
    };
    let agree = v.verdict == predicted && covers.is_none_or(|c| c == v.verdict);
    Ok(ClassificationRow {
        table: m.table,
        family: m.family.clone(),
        params: m.params.clone(),
        predicted,
        computed: v.verdict,
        method: v.method,
        witness: v.witness,
        covers,
        agree,
    })
}

/// The group and automorphism of a principal family member.
pub fn group_and_auto(m: &FamilyMember) -> Result<(GroupTable, Automorphism)> {
    use construct::QuandleSpec;
    match &m.spec {
        QuandleSpec::Affine { group, auto } | QuandleSpec::Principal { group, auto } => {
            let (g, c) = group.build()?;
            let f = auto.build(&g, c.as_ref(), group)?;
            Ok((g, f))
        }
        _ => Err(Error::BadParams("member is not principal".into())),
    }
}

/// Size-p² classification: the affine families over `Z_p²` and the cyclic ones.
pub fn classify_p2(p: u64, with_covers: bool, opts: &DecideOptions) -> Result<Vec<ClassificationRow>> {
    if ![3, 5, 7].contains(&p) {
        return Err(Error::BadPrime(p));
    }
    let mut members = families::affine_p2(p)?;
    members.extend(families::cyclic_p2(p)?);
    members.iter().map(|m| classify_member(m, with_covers, opts)).collect()
}

/// Members checked by [`classify_p3`]: all of them, or one per family and predicted verdict.
pub fn p3_members(p: u64, scope: &[FamilyTable], full: bool) -> Result<Vec<FamilyMember>> {
    if ![5, 7].contains(&p) {
        return Err(Error::BadPrime(p));
    }
    let mut members = Vec::new();
    for &t in scope {
        if !FamilyTable::P3.contains(&t) {
            return Err(Error::BadParams(format!("{t:?} is not a size-p³ list")));
        }
        members.extend(families::members(t, p)?);
    }
    Ok(if full { members } else { families::stratified(members) })
}

pub fn classify_p3(p: u64, scope: &[FamilyTable], full: bool, opts: &DecideOptions) -> Result<Vec<ClassificationRow>> {
    p3_members(p, scope, full)?.iter().map(|m| classify_member(m, false, opts)).collect()
}

/// Deterministic row order: table, family, parameters.
pub fn sort_rows(rows: &mut [ClassificationRow]) {
    rows.sort_by(|a, b| (a.table, &a.family, &a.params).cmp(&(b.table, &b.family, &b.params)));
}
