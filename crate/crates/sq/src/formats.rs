//! Text formats for groups, quandles and cocycles.
//!
//! Each file starts with a header line (`group n`, `quandle n` or
//! `cocycle n q`) followed by `n` rows of `n` whitespace-separated numbers.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use sq_core::cocycle::AbelianCocycle;
use sq_core::group::{validate_group, GroupTable};
use sq_core::quandle::QuandleTable;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(#[from] sq_core::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

struct Block {
    header: Vec<u64>,
    rows: Vec<Vec<u64>>,
}

/// Reads consecutive blocks with the given keyword; `extra` header numbers follow `n`.
fn parse_blocks(text: &str, keyword: &str, extra: usize) -> Result<Vec<Block>, FormatError> {
    let mut lines = content_lines(text).peekable();
    let mut out = Vec::new();
    while let Some((ln, head)) = lines.next() {
        let mut toks = head.split_whitespace();
        if toks.next() != Some(keyword) {
            return Err(syntax(ln, format!("expected `{keyword}` header")));
        }
        let header: Vec<u64> = toks
            .map(|t| t.parse::<u64>().map_err(|_| syntax(ln, format!("bad number `{t}`"))))
            .collect::<Result<_, _>>()?;
        if header.len() != 1 + extra {
            return Err(syntax(ln, format!("`{keyword}` header takes {} numbers", 1 + extra)));
        }
        let n = header[0] as usize;
        if n == 0 {
            return Err(syntax(ln, "size must be positive"));
        }
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let (ln, line) = lines.next().ok_or_else(|| syntax(ln, format!("expected {n} rows, found {r}")))?;
            let row: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| syntax(ln, format!("bad number `{t}`"))))
                .collect::<Result<_, _>>()?;
            if row.len() != n {
                return Err(syntax(ln, format!("row has {} entries, expected {n}", row.len())));
            }
            rows.push(row);
        }
        out.push(Block { header, rows });
    }
    if out.is_empty() {
        return Err(syntax(1, format!("missing `{keyword}` header")));
    }
    Ok(out)
}

fn single(mut blocks: Vec<Block>, keyword: &str) -> Result<Block, FormatError> {
    if blocks.len() != 1 {
        return Err(syntax(1, format!("expected one `{keyword}` block, found {}", blocks.len())));
    }
    Ok(blocks.remove(0))
}

fn to_usize(rows: Vec<Vec<u64>>) -> Vec<Vec<usize>> {
    rows.into_iter().map(|r| r.into_iter().map(|v| v as usize).collect()).collect()
}

fn write_rows<T: std::fmt::Display>(out: &mut String, rows: impl Iterator<Item = Vec<T>>) {
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

/// Parses a quandle file into a validated left quasigroup (axiom flags are cached, not enforced).
pub fn parse_quandle(text: &str) -> Result<QuandleTable, FormatError> {
    let b = single(parse_blocks(text, "quandle", 0)?, "quandle")?;
    Ok(QuandleTable::validate(&to_usize(b.rows))?)
}

pub fn write_quandle(q: &QuandleTable) -> String {
    let mut s = format!("quandle {}\n", q.size());
    write_rows(&mut s, q.rows().into_iter());
    s
}

pub fn parse_group(text: &str) -> Result<GroupTable, FormatError> {
    let b = single(parse_blocks(text, "group", 0)?, "group")?;
    Ok(validate_group(&to_usize(b.rows))?)
}

pub fn write_group(g: &GroupTable) -> String {
    let mut s = format!("group {}\n", g.order());
    write_rows(&mut s, g.rows().into_iter());
    s
}

/// Raw cocycle blocks as `(modulus, rows)`, without validation.
pub fn parse_cocycle_rows(text: &str) -> Result<Vec<(u64, Vec<Vec<u64>>)>, FormatError> {
    Ok(parse_blocks(text, "cocycle", 1)?.into_iter().map(|b| (b.header[1], b.rows)).collect())
}

/// Parses one cocycle and validates it against `q`.
pub fn parse_cocycle(text: &str, q: &QuandleTable) -> Result<AbelianCocycle, FormatError> {
    let mut blocks = parse_cocycle_rows(text)?;
    if blocks.len() != 1 {
        return Err(syntax(1, format!("expected one `cocycle` block, found {}", blocks.len())));
    }
    let (m, rows) = blocks.remove(0);
    if rows.len() != q.size() {
        return Err(syntax(1, format!("cocycle has size {}, quandle has {}", rows.len(), q.size())));
    }
    Ok(AbelianCocycle::new(q, m, &rows)?)
}

pub fn write_cocycle(t: &AbelianCocycle) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "cocycle {} {}", t.size(), t.modulus());
    write_rows(&mut s, t.rows().into_iter());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use sq_core::construct::core;
    use sq_core::group::cyclic;

    #[test]
    fn comments_and_blank_lines() {
        let q = parse_quandle("# dihedral\nquandle 3\n\n0 2 1\n2 1 0\n1 0 2\n").unwrap();
        assert!(q.flags().is_latin);
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let e = parse_quandle("quandle 2\n0 1\n1 x\n").unwrap_err();
        assert!(e.to_string().starts_with("line 3"), "{e}");
        assert!(parse_quandle("quandle 2\n0 1\n").is_err());
        assert!(parse_quandle("group 2\n0 1\n1 0\n").is_err());
        assert!(parse_group("group 2\n0 1\n1 1\n").is_err());
    }

    #[test]
    fn several_cocycle_blocks() {
        let q = core(&cyclic(3)).unwrap();
        let z = AbelianCocycle::zero(3, 5);
        let text = format!("{}{}", write_cocycle(&z), write_cocycle(&z));
        assert_eq!(parse_cocycle_rows(&text).unwrap().len(), 2);
        assert!(parse_cocycle(&text, &q).is_err());
        assert_eq!(parse_cocycle(&write_cocycle(&z), &q).unwrap(), z);
    }
}
