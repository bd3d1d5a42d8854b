//! Concrete p-groups of order p³ and p⁴ given by power-commutator
//! presentations, their parametrized automorphism families, and the
//! `(good)` condition used by the cover search.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{
    center, derived_subgroup, fixed_subgroup, frattini, induced_automorphism, quotient, Automorphism, GroupTable,
    Subgroup,
};
use crate::pc::PolycyclicPresentation;

/// How a generator's image is derived from earlier ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GenDef {
    Free,
    Comm(usize, usize),
    Power(usize),
}

/// A group realized from a presentation, with its generators at known indices.
#[derive(Clone, Debug)]
pub struct PcGroup {
    pub name: String,
    pub pc: PolycyclicPresentation,
    pub table: GroupTable,
    defs: Vec<GenDef>,
}

impl PcGroup {
    pub fn from_pc(name: impl Into<String>, pc: PolycyclicPresentation) -> Result<Self> {
        let table = pc.to_table()?;
        let k = pc.ngens;
        let unit = |t: usize| -> Vec<u32> {
            let mut v = vec![0u32; k];
            v[t] = 1;
            v
        };
        let mut defs = vec![GenDef::Free; k];
        for t in 0..k {
            let u = unit(t);
            'search: for j in 0..t {
                for i in 0..j {
                    if pc.comm_relation(j, i) == u.as_slice() {
                        defs[t] = GenDef::Comm(j, i);
                        break 'search;
                    }
                }
            }
            if defs[t] == GenDef::Free {
                if let Some(i) = (0..t).find(|&i| pc.power_relation(i) == u.as_slice()) {
                    defs[t] = GenDef::Power(i);
                }
            }
        }
        Ok(PcGroup { name: name.into(), pc, table, defs })
    }

    pub fn prime(&self) -> u64 {
        self.pc.p as u64
    }

    /// Table index of generator `a_{i+1}`.
    pub fn gen(&self, i: usize) -> usize {
        self.pc.generator(i)
    }

    pub fn ngens(&self) -> usize {
        self.pc.ngens
    }

    /// Generators (0-based numbers) not defined by a relation from earlier ones.
    pub fn min_gens(&self) -> Vec<usize> {
        (0..self.ngens()).filter(|&t| self.defs[t] == GenDef::Free).collect()
    }

    /// Evaluates `Π a_j^{e}` in order.
    pub fn eval_word(&self, w: &[(usize, i64)]) -> usize {
        w.iter().fold(0, |acc, &(j, e)| self.table.mul(acc, self.table.pow(self.gen(j), e)))
    }

    fn eval_exponents(&self, e: &[u32], y: &[usize]) -> usize {
        e.iter().enumerate().fold(0, |acc, (j, &c)| self.table.mul(acc, self.table.pow(y[j], c as i64)))
    }

    /// Images of all generators from images of the free ones.
    pub fn derive_images(&self, free_images: &[usize]) -> Vec<usize> {
        let g = &self.table;
        let mut y = vec![0usize; self.ngens()];
        let mut it = free_images.iter();
        for t in 0..self.ngens() {
            y[t] = match self.defs[t] {
                GenDef::Free => *it.next().expect("one image per free generator"),
                GenDef::Comm(j, i) => g.commutator(y[j], y[i]),
                GenDef::Power(i) => g.pow(y[i], self.prime() as i64),
            };
        }
        y
    }

    /// Checks every defining relation on the proposed generator images.
    pub fn relations_hold(&self, y: &[usize]) -> bool {
        let g = &self.table;
        let p = self.prime() as i64;
        for i in 0..self.ngens() {
            if g.pow(y[i], p) != self.eval_exponents(self.pc.power_relation(i), y) {
                return false;
            }
            for j in i + 1..self.ngens() {
                if g.commutator(y[j], y[i]) != self.eval_exponents(self.pc.comm_relation(j, i), y) {
                    return false;
                }
            }
        }
        true
    }

    /// Image array of the endomorphism with the given generator images,
    /// or an error when the relations fail or the map is not bijective.
    pub fn map_from_images(&self, y: &[usize]) -> Result<Vec<u32>> {
        if !self.relations_hold(y) {
            return Err(Error::NotAutomorphism("generator images violate a relation".into()));
        }
        let n = self.table.order();
        let k = self.ngens();
        let p = self.prime() as usize;
        // powers y_j^e for e < p
        let pows: Vec<Vec<usize>> = (0..k)
            .map(|j| {
                let mut v = vec![0usize; p];
                for e in 1..p {
                    v[e] = self.table.mul(v[e - 1], y[j]);
                }
                v
            })
            .collect();
        let mut image = vec![0u32; n];
        let mut seen = vec![false; n];
        for (x, slot) in image.iter_mut().enumerate() {
            let e = self.pc.exponents(x);
            let v = (0..k).fold(0, |acc, j| self.table.mul(acc, pows[j][e[j] as usize]));
            if seen[v] {
                return Err(Error::NotAutomorphism("map is not injective".into()));
            }
            seen[v] = true;
            *slot = v as u32;
        }
        Ok(image)
    }

    /// The automorphism determined by images of the free generators.
    pub fn automorphism_from_free(&self, free_images: &[usize]) -> Result<Automorphism> {
        let y = self.derive_images(free_images);
        Ok(Automorphism { image: self.map_from_images(&y)? })
    }

    pub fn exponents(&self, x: usize) -> Vec<u32> {
        self.pc.exponents(x)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::BadPrime(p))
    }
}

pub const APPENDIX_IDS: [u8; 10] = [3, 4, 6, 7, 8, 9, 10, 12, 13, 14];

/// Presentation of the order-p⁴ group with the given catalog id.
pub fn appendix_presentation(id: u8, p: u64, w: Option<u64>) -> Result<PolycyclicPresentation> {
    check_prime(p)?;
    let pc = PolycyclicPresentation::new(p as u32, 4);
    // generators a1..a4 are 0..3
    Ok(match id {
        3 => pc.comm(1, 0, &[(2, 1)]).power(0, &[(3, 1)]),
        4 => pc.comm(1, 0, &[(3, 1)]).power(0, &[(2, 1)]).power(1, &[(3, 1)]),
        6 => pc.comm(1, 0, &[(3, 1)]).power(0, &[(2, 1)]).power(2, &[(3, 1)]),
        7 => pc.comm(1, 0, &[(2, 1)]).comm(2, 0, &[(3, 1)]),
        8 => pc.comm(1, 0, &[(2, 1)]).comm(2, 0, &[(3, 1)]).power(0, &[(3, 1)]),
        9 => pc.comm(1, 0, &[(2, 1)]).comm(2, 0, &[(3, 1)]).power(1, &[(3, 1)]),
        10 => {
            let w = match w {
                Some(w) => {
                    if w % p == 0 || arith::is_square_mod(w, p) {
                        return Err(Error::BadResidue(w));
                    }
                    w
                }
                None => arith::least_nonresidue(p),
            };
            pc.comm(1, 0, &[(2, 1)]).comm(2, 0, &[(3, 1)]).power(1, &[(3, w as u32)])
        }
        12 => pc.comm(1, 0, &[(3, 1)]),
        13 => pc.comm(1, 0, &[(3, 1)]).power(0, &[(3, 1)]),
        14 => pc.comm(1, 0, &[(3, 1)]).power(2, &[(3, 1)]),
        _ => return Err(Error::BadParams(format!("unknown catalog id {id}"))),
    })
}

pub fn build_appendix_group(id: u8, p: u64, w: Option<u64>) -> Result<PcGroup> {
    PcGroup::from_pc(format!("G{id}"), appendix_presentation(id, p, w)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P3Kind {
    Cyclic,
    Zp2xZp,
    ElemAbelian,
    Heisenberg,
    Modular,
}

pub fn build_order_p3_group(kind: P3Kind, p: u64) -> Result<PcGroup> {
    check_prime(p)?;
    let pc = PolycyclicPresentation::new(p as u32, 3);
    let (name, pc) = match kind {
        P3Kind::Cyclic => ("cyclic", pc.power(0, &[(1, 1)]).power(1, &[(2, 1)])),
        P3Kind::Zp2xZp => ("Zp2xZp", pc.power(0, &[(2, 1)])),
        P3Kind::ElemAbelian => ("elem_abelian", pc),
        P3Kind::Heisenberg => ("heisenberg", pc.comm(1, 0, &[(2, 1)])),
        P3Kind::Modular => ("modular", pc.comm(1, 0, &[(2, 1)]).power(0, &[(2, 1)])),
    };
    PcGroup::from_pc(name, pc)
}

/// Automorphisms of `Z_p² ⋊ Z_p` given by images of `a_1, a_2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeisenbergAuto {
    /// `a_1 ↦ a_1^b`, `a_2 ↦ a_2^c`.
    Dtilde(u64, u64),
    /// `a_1 ↦ a_1^c`, `a_2 ↦ a_1 a_2^c`.
    Gtilde(u64),
    /// `a_1 ↦ a_2`, `a_2 ↦ a_1^{-b_0} a_2^{-b_1}` for `x² + b_1 x + b_0`.
    Htilde { b0: u64, b1: u64 },
}

pub fn table2_table3_automorphism(he: &PcGroup, kind: &HeisenbergAuto) -> Result<Automorphism> {
    let p = he.prime();
    let (i1, i2): (Vec<(usize, i64)>, Vec<(usize, i64)>) = match *kind {
        HeisenbergAuto::Dtilde(b, c) => {
            if b % p == 0 || c % p == 0 {
                return Err(Error::BadParams("exponents must be units".into()));
            }
            (vec![(0, b as i64)], vec![(1, c as i64)])
        }
        HeisenbergAuto::Gtilde(c) => {
            if c % p == 0 {
                return Err(Error::BadParams("exponent must be a unit".into()));
            }
            (vec![(0, c as i64)], vec![(0, 1), (1, c as i64)])
        }
        HeisenbergAuto::Htilde { b0, b1 } => {
            if !arith::is_irreducible_low(&[b0 % p, b1 % p], p) {
                return Err(Error::ReduciblePolynomial);
            }
            (vec![(1, 1)], vec![(0, -(b0 as i64)), (1, -(b1 as i64))])
        }
    };
    he.automorphism_from_free(&[he.eval_word(&i1), he.eval_word(&i2)])
}

/// Condition `(good)`: `Fix(f_Φ) = 1`, `Fix(f) ≤ Z(G) ∩ γ_1(G)` and `|Fix(f)| = p`.
pub fn satisfies_good(g: &GroupTable, f: &Automorphism) -> Result<bool> {
    let n = g.order();
    let (p, _) = arith::prime_power(n as u64).ok_or(Error::NotPGroup(n))?;
    let phi = frattini(g)?;
    let (_, proj) = quotient(g, &phi)?;
    let f_phi = induced_automorphism(f, &phi, &proj)?;
    if !fixed_subgroup(&f_phi).is_trivial() {
        return Ok(false);
    }
    let fix = fixed_subgroup(f);
    let zg = center(g).intersect(&derived_subgroup(g));
    Ok(fix.is_subset_of(&zg) && fix.order() as u64 == p)
}

/// One parameter of an automorphism family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    /// Values range over `0..range`.
    pub range: u64,
    pub nonzero: bool,
}

/// A published family of automorphisms of an appendix group.
#[derive(Clone, Debug)]
pub struct AutoFamily {
    pub id: u8,
    pub p: u64,
    pub params: Vec<ParamSpec>,
}

impl AutoFamily {
    pub fn new(id: u8, p: u64) -> Result<Self> {
        check_prime(p)?;
        let spec = |name: &str, nonzero: bool| ParamSpec { name: name.into(), range: p, nonzero };
        let names: Vec<ParamSpec> = match id {
            3 | 7 => vec![
                spec("u1", true),
                spec("u2", false),
                spec("u3", false),
                spec("u4", false),
                spec("v2", true),
                spec("v3", false),
                spec("v4", false),
            ],
            4 => ["u2", "u3", "u4", "v2", "v3", "v4"].iter().map(|n| spec(n, *n == "v2")).collect(),
            6 => ["u1", "u2", "u3", "u4", "v4"].iter().map(|n| spec(n, *n == "u1")).collect(),
            8 => ["u1", "u2", "u3", "u4", "v3", "v4"].iter().map(|n| spec(n, *n == "u1")).collect(),
            9 | 10 => {
                let mut v = vec![ParamSpec { name: "sign".into(), range: 2, nonzero: false }];
                v.extend(["u3", "u4", "v2", "v3", "v4"].iter().map(|n| spec(n, *n == "v2")));
                v
            }
            12 => ["u1", "u2", "u3", "u4", "v1", "v2", "v3", "v4", "w3", "w4"]
                .iter()
                .map(|n| spec(n, *n == "w3"))
                .collect(),
            13 => ["u1", "u2", "u3", "u4", "v2", "v3", "v4", "w3", "w4"]
                .iter()
                .map(|n| spec(n, matches!(*n, "u1" | "v2" | "w3")))
                .collect(),
            14 => ["u1", "u2", "u4", "v1", "v2", "v4", "w4"].iter().map(|n| spec(n, false)).collect(),
            _ => return Err(Error::BadParams(format!("unknown catalog id {id}"))),
        };
        Ok(AutoFamily { id, p, params: names })
    }

    fn get(&self, t: &[u64], name: &str) -> i64 {
        let i = self.params.iter().position(|s| s.name == name).expect("known parameter");
        t[i] as i64
    }

    /// `u_1 v_2 - v_1 u_2` for the families carrying a 2×2 block.
    fn det(&self, t: &[u64]) -> u64 {
        let (u1, u2, v1, v2) = (self.get(t, "u1"), self.get(t, "u2"), self.get(t, "v1"), self.get(t, "v2"));
        arith::modp(u1 * v2 - v1 * u2, self.p)
    }

    pub fn admissible(&self, t: &[u64]) -> bool {
        if t.len() != self.params.len() {
            return false;
        }
        if self.params.iter().zip(t).any(|(s, &x)| x >= s.range || (s.nonzero && x == 0)) {
            return false;
        }
        match self.id {
            12 | 14 => self.det(t) != 0,
            _ => true,
        }
    }

    pub fn admissible_count(&self) -> u64 {
        let p = self.p;
        let free: u64 = self
            .params
            .iter()
            .filter(|s| !matches!(s.name.as_str(), "u1" | "u2" | "v1" | "v2") || !matches!(self.id, 12 | 14))
            .map(|s| if s.nonzero { s.range - 1 } else { s.range })
            .product();
        match self.id {
            12 | 14 => free * (p * p - 1) * (p * p - p),
            _ => free,
        }
    }

    /// Images of the free generators as words `[(generator, exponent)]`.
    pub fn images(&self, t: &[u64]) -> Vec<Vec<(usize, i64)>> {
        let g = |n: &str| self.get(t, n);
        match self.id {
            3 | 7 => vec![
                vec![(0, g("u1")), (1, g("u2")), (2, g("u3")), (3, g("u4"))],
                vec![(1, g("v2")), (2, g("v3")), (3, g("v4"))],
            ],
            4 => vec![
                vec![(0, 1), (1, g("u2")), (2, g("u3")), (3, g("u4"))],
                vec![(1, g("v2")), (2, g("v3")), (3, g("v4"))],
            ],
            6 => vec![vec![(0, g("u1")), (1, g("u2")), (2, g("u3")), (3, g("u4"))], vec![(1, 1), (3, g("v4"))]],
            8 => vec![
                vec![(0, g("u1")), (1, g("u2")), (2, g("u3")), (3, g("u4"))],
                vec![(1, -g("u1")), (2, g("v3")), (3, g("v4"))],
            ],
            9 | 10 => {
                let s = if g("sign") == 0 { 1 } else { -1 };
                vec![vec![(0, s), (2, g("u3")), (3, g("u4"))], vec![(1, g("v2")), (2, g("v3")), (3, g("v4"))]]
            }
            12 => vec![
                vec![(0, g("u1")), (1, g("u2")), (2, g("u3")), (3, g("u4"))],
                vec![(0, g("v1")), (1, g("v2")), (2, g("v3")), (3, g("v4"))],
                vec![(2, g("w3")), (3, g("w4"))],
            ],
            13 => vec![
                vec![(0, g("u1")), (1, g("u2")), (2, g("u3")), (3, g("u4"))],
                vec![(1, g("v2")), (2, g("v3")), (3, g("v4"))],
                vec![(2, g("w3")), (3, g("w4"))],
            ],
            14 => vec![
                vec![(0, g("u1")), (1, g("u2")), (3, g("u4"))],
                vec![(0, g("v1")), (1, g("v2")), (3, g("v4"))],
                vec![(2, self.det(t) as i64), (3, g("w4"))],
            ],
            _ => unreachable!(),
        }
    }

    /// The closed-form prediction for `(good)`.
    pub fn closed_form(&self, t: &[u64]) -> bool {
        let p = self.p as i64;
        let m = |x: i64| x.rem_euclid(p);
        match self.id {
            3 | 13 => {
                let (u1, v2) = (self.get(t, "u1"), self.get(t, "v2"));
                m(u1 * v2) == 1 && u1 != 1 && v2 != 1
            }
            7 => {
                let (u1, v2) = (self.get(t, "u1"), self.get(t, "v2"));
                m(u1 * u1 * v2) == 1 && u1 != 1 && v2 != 1
            }
            12 => self.det(t) == 1 && m(self.get(t, "u1") + self.get(t, "v2")) != 2,
            _ => false,
        }
    }

    /// Decodes a mixed-radix counter into a raw tuple.
    pub fn tuple_at(&self, mut code: u64) -> Vec<u64> {
        self.params
            .iter()
            .map(|s| {
                let d = code % s.range;
                code /= s.range;
                d
            })
            .collect()
    }

    pub fn raw_count(&self) -> u64 {
        self.params.iter().map(|s| s.range).product()
    }
}

/// `appendix_automorphism(i, p, params)` on an already realized group.
pub fn appendix_automorphism(g: &PcGroup, fam: &AutoFamily, t: &[u64]) -> Result<Automorphism> {
    if !fam.admissible(t) {
        return Err(Error::BadParams(format!("tuple {t:?} violates the family constraints")));
    }
    let free: Vec<usize> = fam.images(t).iter().map(|w| g.eval_word(w)).collect();
    g.automorphism_from_free(&free)
}

/// Per-tuple `(good)` evaluation for family members, using that the free
/// generators form a basis modulo the Frattini subgroup.
pub struct GoodChecker<'a> {
    g: &'a PcGroup,
    /// Number of free generators (dimension of G/Φ).
    d: usize,
    phi_elems: Vec<usize>,
    zg: Subgroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoodOutcome {
    NotAutomorphism,
    Good,
    NotGood,
}

impl<'a> GoodChecker<'a> {
    pub fn new(g: &'a PcGroup) -> Result<Self> {
        let phi = frattini(&g.table)?;
        let free = g.min_gens();
        let d = free.len();
        // Φ must be spanned by the dependent generators and the free ones must come first
        if free != (0..d).collect::<Vec<_>>() || phi.order() != g.table.order() / (g.prime() as usize).pow(d as u32) {
            return Err(Error::PreconditionFailed("free generators are not a Frattini basis".into()));
        }
        let zg = center(&g.table).intersect(&derived_subgroup(&g.table));
        Ok(GoodChecker { g, d, phi_elems: phi.elements().collect(), zg })
    }

    pub fn check(&self, free_images: &[usize]) -> GoodOutcome {
        let g = self.g;
        let p = g.prime();
        let y = g.derive_images(free_images);
        if !g.relations_hold(&y) {
            return GoodOutcome::NotAutomorphism;
        }
        // matrix of f on G/Φ: column j holds the leading exponents of y_j
        let d = self.d;
        let mut m = vec![vec![0u64; d]; d];
        for j in 0..d {
            let e = g.exponents(y[j]);
            for i in 0..d {
                m[i][j] = e[i] as u64;
            }
        }
        if crate::linalg::det_mod(&m, p) == 0 {
            return GoodOutcome::NotAutomorphism;
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = (row[i] + p - 1) % p;
        }
        if crate::linalg::det_mod(&m, p) == 0 {
            return GoodOutcome::NotGood;
        }
        // Fix(f_Φ) = 1 forces Fix(f) ≤ Φ
        let k = g.ngens();
        let pu = p as usize;
        let pows: Vec<Vec<usize>> = (d..k)
            .map(|j| {
                let mut v = vec![0usize; pu];
                for e in 1..pu {
                    v[e] = g.table.mul(v[e - 1], y[j]);
                }
                v
            })
            .collect();
        let mut fix = 0usize;
        for &x in &self.phi_elems {
            let e = g.exponents(x);
            let fx = (d..k).fold(0, |acc, j| g.table.mul(acc, pows[j - d][e[j] as usize]));
            if fx == x {
                if !self.zg.contains(x) {
                    return GoodOutcome::NotGood;
                }
                fix += 1;
            }
        }
        if fix as u64 == p {
            GoodOutcome::Good
        } else {
            GoodOutcome::NotGood
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    /// Exhaustive up to `threshold` admissible tuples, sampled above.
    Auto { threshold: u64, samples: u64, seed: u64 },
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

pub const DEFAULT_SEED: u64 = 0xC0C1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub params: Vec<u64>,
    pub closed_form: bool,
    pub direct: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub group_id: u8,
    pub prime: u64,
    pub mode: String,
    pub tuples_checked: u64,
    /// Admissible tuples whose generator images do not define an automorphism.
    pub invalid_tuples: u64,
    pub good_tuples: u64,
    pub closed_form_true: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
}

const MISMATCH_LIST_CAP: usize = 1000;

/// Compares the closed form with direct `(good)` checks over one family.
pub fn verify_family(g: &PcGroup, fam: &AutoFamily, mode: VerifyMode) -> Result<FamilyReport> {
    verify_family_with(g, fam, mode, |_| {})
}

/// [`verify_family`], also handing every mismatch to `on_mismatch` (the
/// report keeps only the first thousand).
pub fn verify_family_with(
    g: &PcGroup,
    fam: &AutoFamily,
    mode: VerifyMode,
    mut on_mismatch: impl FnMut(&Mismatch),
) -> Result<FamilyReport> {
    let checker = GoodChecker::new(g)?;
    let count = fam.admissible_count();
    let (exhaustive, samples, seed) = match mode {
        VerifyMode::Auto { threshold, samples, seed } => (count <= threshold, samples, seed),
        VerifyMode::Exhaustive => (true, 0, 0),
        VerifyMode::Sampled { samples, seed } => (false, samples, seed),
    };
    let mut rep = FamilyReport {
        group_id: fam.id,
        prime: fam.p,
        mode: if exhaustive { "exhaustive".into() } else { format!("sampled({samples})") },
        tuples_checked: 0,
        invalid_tuples: 0,
        good_tuples: 0,
        closed_form_true: 0,
        mismatch_count: 0,
        mismatches: Vec::new(),
    };
    let mut visit = |t: &[u64]| {
        let free: Vec<usize> = fam.images(t).iter().map(|w| g.eval_word(w)).collect();
        let outcome = checker.check(&free);
        let direct = outcome == GoodOutcome::Good;
        let closed = fam.closed_form(t);
        rep.tuples_checked += 1;
        rep.invalid_tuples += (outcome == GoodOutcome::NotAutomorphism) as u64;
        rep.good_tuples += direct as u64;
        rep.closed_form_true += closed as u64;
        if direct != closed {
            let m = Mismatch { params: t.to_vec(), closed_form: closed, direct };
            on_mismatch(&m);
            rep.mismatch_count += 1;
            if rep.mismatches.len() < MISMATCH_LIST_CAP {
                rep.mismatches.push(m);
            }
        }
    };
    if exhaustive {
        for code in 0..fam.raw_count() {
            let t = fam.tuple_at(code);
            if fam.admissible(&t) {
                visit(&t);
            }
        }
    } else {
        // each family draws from its own stream derived from the root seed
        let stream = seed ^ ((fam.id as u64) << 32) ^ (fam.p << 48);
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        let mut done = 0;
        while done < samples {
            let t: Vec<u64> = fam.params.iter().map(|s| rng.random_range(0..s.range)).collect();
            if fam.admissible(&t) {
                visit(&t);
                done += 1;
            }
        }
    }
    Ok(rep)
}

/// Runs [`verify_family`] over every appendix group at prime `p`.
pub fn verify_appendix_lemmas(p: u64, mode: VerifyMode) -> Result<Vec<FamilyReport>> {
    APPENDIX_IDS
        .iter()
        .map(|&id| {
            let g = build_appendix_group(id, p, None)?;
            let fam = AutoFamily::new(id, p)?;
            verify_family(&g, &fam, mode)
        })
        .collect()
}

