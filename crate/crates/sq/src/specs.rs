//! Command-line descriptors for groups and automorphisms.
//!
//! Groups: `cyclic:9`, `elem:5^3`, `abelian:9,3`, `metacyclic:7,3,2`,
//! `heisenberg:5`, `modular:5`, `catalog:12:5` (appendix group `G12` at p=5),
//! or a path to a group file (optionally prefixed `file:`).
//!
//! Automorphisms: `identity`, `exp:k`, `matrix:2,1;0,2`, `inner:g`,
//! `image:0,2,1,...`, `dt:b,c`, `gt:c`, `ht:b0,b1` (Heisenberg only) and
//! `family:t1,t2,...` (catalog groups only).

use std::path::Path;

use anyhow::{bail, Context};
use sq_core::catalog::{HeisenbergAuto, P3Kind};
use sq_core::construct::{AutoSpec, GroupSpec};
use sq_core::group::{AbelianCoords, Automorphism, GroupTable};

use crate::UsageError;

/// A parsed group with its buildable description, when it has one.
#[derive(Debug)]
pub struct GroupArg {
    pub table: GroupTable,
    pub coords: Option<AbelianCoords>,
    pub spec: Option<GroupSpec>,
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn numbers<T: std::str::FromStr>(s: &str, sep: char, what: &str) -> anyhow::Result<Vec<T>> {
    s.split(sep)
        .map(|t| t.trim().parse::<T>().map_err(|_| usage(format!("bad number `{t}` in {what}"))))
        .collect()
}

pub fn parse_group_spec(s: &str) -> anyhow::Result<Option<GroupSpec>> {
    let (kind, rest) = match s.split_once(':') {
        Some((k, r)) => (k, r),
        None => return Ok(None),
    };
    let one = |what: &str| -> anyhow::Result<u64> {
        rest.trim().parse::<u64>().map_err(|_| usage(format!("bad {what} `{rest}`")))
    };
    Ok(Some(match kind {
        "cyclic" => GroupSpec::Abelian { moduli: vec![one("order")?] },
        "elem" => {
            let (p, k) = rest.split_once('^').ok_or_else(|| usage("expected elem:p^k"))?;
            let p: u64 = p.parse().map_err(|_| usage(format!("bad prime `{p}`")))?;
            let k: usize = k.parse().map_err(|_| usage(format!("bad exponent `{k}`")))?;
            if k == 0 {
                return Err(usage("exponent must be positive"));
            }
            GroupSpec::Abelian { moduli: vec![p; k] }
        }
        "abelian" => GroupSpec::Abelian { moduli: numbers(rest, ',', "moduli")? },
        "metacyclic" => match numbers::<u64>(rest, ',', "metacyclic parameters")?[..] {
            [n, m, r] => GroupSpec::Metacyclic { n, m, r },
            _ => return Err(usage("expected metacyclic:n,m,r")),
        },
        "heisenberg" => GroupSpec::OrderP3 { group: P3Kind::Heisenberg, p: one("prime")? },
        "modular" => GroupSpec::OrderP3 { group: P3Kind::Modular, p: one("prime")? },
        "catalog" => match numbers::<u64>(rest, ':', "catalog group")?[..] {
            [id, p] if id <= u8::MAX as u64 => GroupSpec::Appendix { id: id as u8, p },
            _ => return Err(usage("expected catalog:id:p")),
        },
        "file" => return Ok(None),
        _ => return Err(usage(format!("unknown group kind `{kind}`"))),
    }))
}

pub fn parse_group(s: &str) -> anyhow::Result<GroupArg> {
    if let Some(spec) = parse_group_spec(s)? {
        let (table, coords) = spec.build().map_err(|e| usage(format!("group `{s}`: {e}")))?;
        return Ok(GroupArg { table, coords, spec: Some(spec) });
    }
    let path = s.strip_prefix("file:").unwrap_or(s);
    let text = std::fs::read_to_string(Path::new(path)).with_context(|| format!("reading {path}"))?;
    let table = crate::formats::parse_group(&text).map_err(|e| usage(format!("{path}: {e}")))?;
    Ok(GroupArg { table, coords: None, spec: None })
}

pub fn parse_auto_spec(s: &str) -> anyhow::Result<AutoSpec> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    Ok(match kind {
        "identity" | "id" => AutoSpec::Identity,
        "exp" => AutoSpec::Power { k: rest.trim().parse().map_err(|_| usage(format!("bad exponent `{rest}`")))? },
        "matrix" => AutoSpec::Matrix {
            rows: rest.split(';').map(|r| numbers(r, ',', "matrix")).collect::<anyhow::Result<_>>()?,
        },
        "image" => AutoSpec::Image { image: numbers(rest, ',', "image")? },
        "dt" => match numbers::<u64>(rest, ',', "dt")?[..] {
            [b, c] => AutoSpec::Heisenberg { map: HeisenbergAuto::Dtilde(b, c) },
            _ => return Err(usage("expected dt:b,c")),
        },
        "gt" => AutoSpec::Heisenberg {
            map: HeisenbergAuto::Gtilde(rest.trim().parse().map_err(|_| usage(format!("bad exponent `{rest}`")))?),
        },
        "ht" => match numbers::<u64>(rest, ',', "ht")?[..] {
            [b0, b1] => AutoSpec::Heisenberg { map: HeisenbergAuto::Htilde { b0, b1 } },
            _ => return Err(usage("expected ht:b0,b1")),
        },
        "family" => AutoSpec::AppendixFamily { params: numbers(rest, ',', "family parameters")? },
        "inner" => bail!(UsageError("inner automorphisms are built with build_auto".into())),
        _ => return Err(usage(format!("unknown automorphism kind `{kind}`"))),
    })
}

pub fn build_auto(g: &GroupArg, s: &str) -> anyhow::Result<Automorphism> {
    if let Some(x) = s.strip_prefix("inner:") {
        let x: usize = x.trim().parse().map_err(|_| usage(format!("bad element `{x}`")))?;
        if x >= g.table.order() {
            return Err(usage(format!("element {x} is outside the group")));
        }
        return Ok(Automorphism::inner(&g.table, x));
    }
    let spec = parse_auto_spec(s)?;
    let gspec = match (&spec, &g.spec) {
        (AutoSpec::Heisenberg { .. } | AutoSpec::AppendixFamily { .. }, None) => {
            return Err(usage(format!("`{s}` needs a named group, not a group file")))
        }
        (_, Some(gs)) => gs.clone(),
        // only consulted for Heisenberg and family maps
        (_, None) => GroupSpec::Abelian { moduli: vec![1] },
    };
    spec.build(&g.table, g.coords.as_ref(), &gspec).map_err(|e| usage(format!("automorphism `{s}`: {e}")))
}
