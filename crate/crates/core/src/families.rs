//! Parametrized families of connected quandles of size p² and p³, with the
//! closed-form prediction of simple connectedness for each member.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::arith::{self, inv_mod, modp};
use crate::catalog::{HeisenbergAuto, P3Kind};
use crate::construct::{AutoSpec, GroupSpec, QuandleSpec};
use crate::error::{Error, Result};

/// Which list a family belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTable {
    /// `Aff(Z_p², f)`.
    AffineP2,
    /// `Aff(Z_{p²}, k)`.
    CyclicP2,
    /// `Aff(Z_{p²} × Z_p, f)`.
    AffineZp2Zp,
    /// `Aff(Z_p³, f)`.
    AffineElem,
    /// Principal non-faithful over `Z_p² ⋊ Z_p`.
    Nonfaithful,
    /// Principal faithful non-affine over `Z_p² ⋊ Z_p`.
    NonaffineFaithful,
}

impl FamilyTable {
    pub const P3: [FamilyTable; 4] =
        [FamilyTable::AffineZp2Zp, FamilyTable::AffineElem, FamilyTable::Nonfaithful, FamilyTable::NonaffineFaithful];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub table: FamilyTable,
    /// Family name within the table, e.g. `"D"` or `"Gt"`.
    pub family: String,
    pub params: Vec<u64>,
    pub spec: QuandleSpec,
    /// Closed-form prediction: `true` means simply connected.
    pub predicted: bool,
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    Ok(())
}

fn affine_member(table: FamilyTable, family: &str, params: Vec<u64>, moduli: &[u64], rows: Vec<Vec<i64>>, predicted: bool) -> FamilyMember {
    FamilyMember {
        table,
        family: family.into(),
        params,
        spec: QuandleSpec::Affine { group: GroupSpec::Abelian { moduli: moduli.to_vec() }, auto: AutoSpec::Matrix { rows } },
        predicted,
    }
}

fn heisenberg_member(table: FamilyTable, family: &str, params: Vec<u64>, p: u64, map: HeisenbergAuto, predicted: bool) -> FamilyMember {
    FamilyMember {
        table,
        family: family.into(),
        params,
        spec: QuandleSpec::Principal {
            group: GroupSpec::OrderP3 { group: P3Kind::Heisenberg, p },
            auto: AutoSpec::Heisenberg { map },
        },
        predicted,
    }
}

fn neg(x: u64, p: u64) -> i64 {
    modp(-(x as i64), p) as i64
}

/// Connected affine quandles over `Z_p²` with non-cyclic displacement group.
pub fn affine_p2(p: u64) -> Result<Vec<FamilyMember>> {
    check_odd_prime(p)?;
    let t = FamilyTable::AffineP2;
    let m = [p, p];
    let mut out = Vec::new();
    for b in 2..p {
        for c in b..p {
            let rows = vec![vec![b as i64, 0], vec![0, c as i64]];
            out.push(affine_member(t, "D", vec![b, c], &m, rows, b * c % p != 1));
        }
    }
    for b in 2..p {
        let rows = vec![vec![b as i64, 1], vec![0, b as i64]];
        out.push(affine_member(t, "G", vec![b], &m, rows, b != p - 1));
    }
    for q in arith::irreducible_monic(2, p) {
        let (b0, b1) = (q[0], q[1]);
        let rows = vec![vec![0, 1], vec![neg(b0, p), neg(b1, p)]];
        out.push(affine_member(t, "H", vec![b0, b1], &m, rows, b0 != 1));
    }
    Ok(out)
}

/// `Aff(Z_{p²}, k)` for every `k` making it connected; all are simply connected.
pub fn cyclic_p2(p: u64) -> Result<Vec<FamilyMember>> {
    check_odd_prime(p)?;
    Ok((2..p * p)
        .filter(|k| k % p > 1)
        .map(|k| FamilyMember {
            table: FamilyTable::CyclicP2,
            family: "cyclic".into(),
            params: vec![k],
            spec: QuandleSpec::Affine { group: GroupSpec::Abelian { moduli: vec![p * p] }, auto: AutoSpec::Power { k: k as i64 } },
            predicted: true,
        })
        .collect())
}

/// Connected affine quandles over `Z_{p²} × Z_p`.
///
/// `H(b,c)` with `b = 1` is not connected (`1 - f` is nilpotent mod p) and is skipped.
pub fn affine_zp2_zp(p: u64) -> Result<Vec<FamilyMember>> {
    check_odd_prime(p)?;
    let t = FamilyTable::AffineZp2Zp;
    let m = [p * p, p];
    let pi = p as i64;
    let mut out = Vec::new();
    for b in 1..p * p - 1 {
        if b % p <= 1 {
            continue;
        }
        for c in 2..p {
            let rows = vec![vec![b as i64, 0], vec![0, c as i64]];
            out.push(affine_member(t, "D", vec![b, c], &m, rows, b * c % p != 1));
        }
    }
    for b in 2..p {
        let rows = vec![vec![b as i64, 0], vec![1, b as i64]];
        out.push(affine_member(t, "G", vec![b], &m, rows, b != p - 1));
    }
    for b in 2..p {
        for c in 0..p - 1 {
            let rows = vec![vec![b as i64, pi], vec![c as i64, b as i64]];
            out.push(affine_member(t, "H", vec![b, c], &m, rows, b != p - 1));
        }
    }
    Ok(out)
}

/// Connected affine quandles over `Z_p³`.
///
/// `predicted` is the published closed form. For `G(b,c)` it only asks
/// `b ≠ -1`, which misses the covers that exist when `bc = 1`.
pub fn affine_elem(p: u64) -> Result<Vec<FamilyMember>> {
    check_odd_prime(p)?;
    let t = FamilyTable::AffineElem;
    let m = [p, p, p];
    let mut out = Vec::new();
    for b in 2..p {
        for c in b..p {
            for d in c..p {
                let ok = b * c % p != 1 && b * d % p != 1 && c * d % p != 1;
                let rows = vec![vec![b as i64, 0, 0], vec![0, c as i64, 0], vec![0, 0, d as i64]];
                out.push(affine_member(t, "D", vec![b, c, d], &m, rows, ok));
            }
        }
    }
    for b in 2..p {
        for c in 2..p {
            let rows = vec![vec![b as i64, 1, 0], vec![0, b as i64, 0], vec![0, 0, c as i64]];
            out.push(affine_member(t, "G", vec![b, c], &m, rows, b != p - 1));
        }
    }
    for b in 2..p {
        let rows = vec![vec![b as i64, 1, 0], vec![0, b as i64, 1], vec![0, 0, b as i64]];
        out.push(affine_member(t, "F", vec![b], &m, rows, b != p - 1));
    }
    for q in arith::irreducible_monic(3, p) {
        let rows = vec![vec![0, 1, 0], vec![0, 0, 1], vec![neg(q[0], p), neg(q[1], p), neg(q[2], p)]];
        out.push(affine_member(t, "H3", q, &m, rows, true));
    }
    for q in arith::irreducible_monic(2, p) {
        for c in 2..p {
            let (b0, b1) = (q[0], q[1]);
            let rows = vec![vec![0, 1, 0], vec![neg(b0, p), neg(b1, p), 0], vec![0, 0, c as i64]];
            out.push(affine_member(t, "H2", vec![b0, b1, c], &m, rows, b0 != 1));
        }
    }
    Ok(out)
}

fn dtilde_predicted(b: u64, c: u64, p: u64) -> bool {
    b * b % p * c % p != 1
}

/// Principal non-faithful quandles over `Z_p² ⋊ Z_p` (needs `p > 3`).
///
/// `D̃(1,1)` is the identity map, whose quandle is not connected; it is skipped.
pub fn nonfaithful(p: u64) -> Result<Vec<FamilyMember>> {
    check_p3_prime(p)?;
    let t = FamilyTable::Nonfaithful;
    let mut out = Vec::new();
    for b in 2..p - 1 {
        let bi = inv_mod(b, p).expect("unit");
        if b <= bi && bi < p - 1 {
            out.push(heisenberg_member(t, "Dt", vec![b, bi], p, HeisenbergAuto::Dtilde(b, bi), dtilde_predicted(b, bi, p)));
        }
    }
    let m1 = p - 1;
    out.push(heisenberg_member(t, "Gt", vec![m1], p, HeisenbergAuto::Gtilde(m1), gtilde_predicted(m1, p)));
    for b in 0..p {
        if arith::is_irreducible_low(&[1, b], p) {
            out.push(heisenberg_member(t, "Ht", vec![1, b], p, HeisenbergAuto::Htilde { b0: 1, b1: b }, true));
        }
    }
    Ok(out)
}

fn gtilde_predicted(c: u64, p: u64) -> bool {
    arith::pow_mod(c, 3, p) != 1
}

/// Principal faithful non-affine quandles over `Z_p² ⋊ Z_p` (needs `p > 3`).
pub fn nonaffine_faithful(p: u64) -> Result<Vec<FamilyMember>> {
    check_p3_prime(p)?;
    let t = FamilyTable::NonaffineFaithful;
    let mut out = Vec::new();
    for b in 2..p - 1 {
        for c in b..p - 1 {
            if b * c % p != 1 {
                out.push(heisenberg_member(t, "Dt", vec![b, c], p, HeisenbergAuto::Dtilde(b, c), dtilde_predicted(b, c, p)));
            }
        }
    }
    for c in 2..p - 2 {
        out.push(heisenberg_member(t, "Gt", vec![c], p, HeisenbergAuto::Gtilde(c), gtilde_predicted(c, p)));
    }
    for q in arith::irreducible_monic(2, p) {
        if q[0] != 1 {
            let map = HeisenbergAuto::Htilde { b0: q[0], b1: q[1] };
            out.push(heisenberg_member(t, "Ht", q, p, map, true));
        }
    }
    Ok(out)
}

fn check_p3_prime(p: u64) -> Result<()> {
    check_odd_prime(p)?;
    if p == 3 {
        return Err(Error::BadParams(format!("non-affine lists need p > 3, got {p}")));
    }
    Ok(())
}

/// All members of one table at prime `p`.
pub fn members(table: FamilyTable, p: u64) -> Result<Vec<FamilyMember>> {
    match table {
        FamilyTable::AffineP2 => affine_p2(p),
        FamilyTable::CyclicP2 => cyclic_p2(p),
        FamilyTable::AffineZp2Zp => affine_zp2_zp(p),
        FamilyTable::AffineElem => affine_elem(p),
        FamilyTable::Nonfaithful => nonfaithful(p),
        FamilyTable::NonaffineFaithful => nonaffine_faithful(p),
    }
}

/// One member per (family, predicted verdict), the first in listing order.
pub fn stratified(members: Vec<FamilyMember>) -> Vec<FamilyMember> {
    let mut seen: Vec<(FamilyTable, String, bool)> = Vec::new();
    members
        .into_iter()
        .filter(|m| {
            let key = (m.table, m.family.clone(), m.predicted);
            if seen.contains(&key) {
                false
            } else {
                seen.push(key);
                true
            }
        })
        .collect()
}
