//! Sparse SDPA interchange format (`.dat-s`).
//!
//! Layout: comment lines, number of variables, number of blocks, block
//! sizes (negative for diagonal blocks), objective vector, then one
//! `var block row col value` line per upper-triangle nonzero, all indices
//! one-based and `var = 0` for the constant matrix.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sdp::model::SdpProblem;
use crate::sdp::solver::{BlockSdp, SdpaEntry};

/// Writes `p` in sparse SDPA format. Output is deterministic.
pub fn export_sdpa(p: &SdpProblem) -> String {
    let f = &p.forbidden;
    let title = format!("codebound n={} kind={} m={} even_only={}", p.n, f.kind, f.m, f.even_only);
    write_sdpa(&BlockSdp::from_problem(p), &title)
}

/// Writes a numeric block SDP; `title` becomes a leading comment.
pub fn write_sdpa(p: &BlockSdp, title: &str) -> String {
    let mut s = String::new();
    for line in title.lines() {
        let _ = writeln!(s, "\"{line}");
    }
    let _ = writeln!(s, "* offset {}", fmt_f64(p.offset));
    let _ = writeln!(s, "{}", p.num_vars);
    let _ = writeln!(s, "{}", p.block_sizes.len());
    let sizes: Vec<String> = p.block_sizes.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(s, "{}", sizes.join(" "));
    let obj: Vec<String> = p.c.iter().map(|&v| fmt_f64(v)).collect();
    let _ = writeln!(s, "{}", obj.join(" "));
    let mut entries = p.entries.clone();
    entries.sort_by_key(|e| (e.var, e.block, e.row, e.col));
    for e in entries {
        let _ = writeln!(s, "{} {} {} {} {}", e.var, e.block + 1, e.row + 1, e.col + 1, fmt_f64(e.value));
    }
    s
}

/// Scientific notation with 17 significant digits, enough to round-trip any `f64`.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Splits a header line on the separators SDPA files use around numbers.
fn numbers(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '(' | ')')).filter(|t| !t.is_empty())
}

/// Parses sparse SDPA text. Comment lines starting with `"` or `*` are
/// skipped, except `* offset <value>`, which restores the objective constant.
pub fn import_sdpa(text: &str) -> Result<BlockSdp> {
    let mut offset = 0.0;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('*') {
            if let Some(v) = rest.trim().strip_prefix("offset") {
                offset = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad offset {:?}", v.trim()) })?;
            }
            continue;
        }
        if line.starts_with('"') {
            continue;
        }
        lines.push((i + 1, line));
    }
    let mut it = lines.into_iter();
    let mut next = |what: &str| it.next().ok_or_else(|| Error::Parse { line: 0, msg: format!("missing {what}") });

    let (ln, line) = next("variable count")?;
    let num_vars = first_int(ln, line)?;
    let (ln, line) = next("block count")?;
    let num_blocks = first_int(ln, line)?;
    let (ln, line) = next("block sizes")?;
    let block_sizes: Vec<i64> = numbers(line)
        .take(num_blocks)
        .map(|t| t.parse::<i64>().map_err(|_| Error::Parse { line: ln, msg: format!("bad block size {t:?}") }))
        .collect::<Result<_>>()?;
    if block_sizes.len() != num_blocks || block_sizes.contains(&0) {
        return Err(Error::Parse { line: ln, msg: format!("expected {num_blocks} nonzero block sizes") });
    }
    let (ln, line) = next("objective")?;
    let c: Vec<f64> = numbers(line).take(num_vars).map(|t| parse_f64(ln, t)).collect::<Result<_>>()?;
    if c.len() != num_vars {
        return Err(Error::Parse { line: ln, msg: format!("expected {num_vars} objective coefficients") });
    }
    let mut entries = Vec::new();
    for (ln, line) in it {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 5 {
            return Err(Error::Parse { line: ln, msg: "entry needs var block row col value".into() });
        }
        let idx = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse { line: ln, msg: format!("bad index {t:?}") });
        let (var, block, row, col) = (idx(f[0])?, idx(f[1])?, idx(f[2])?, idx(f[3])?);
        if block == 0 || row == 0 || col == 0 || block > num_blocks || var > num_vars {
            return Err(Error::Parse { line: ln, msg: "index out of range".into() });
        }
        let dim = block_sizes[block - 1].unsigned_abs() as usize;
        if row > dim || col > dim {
            return Err(Error::Parse { line: ln, msg: format!("position ({row}, {col}) outside block of size {dim}") });
        }
        entries.push(SdpaEntry { var, block: block - 1, row: row - 1, col: col - 1, value: parse_f64(ln, f[4])? });
    }
    let mut p = BlockSdp { num_vars, block_sizes, c, entries, offset };
    p.normalize();
    p.validate()?;
    Ok(p)
}

fn first_int(line: usize, text: &str) -> Result<usize> {
    numbers(text)
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse { line, msg: format!("expected an integer, got {text:?}") })
}

fn parse_f64(line: usize, t: &str) -> Result<f64> {
    // Some writers use Fortran-style exponents.
    let v: f64 =
        t.replace(['d', 'D'], "e").parse().map_err(|_| Error::Parse { line, msg: format!("bad number {t:?}") })?;
    if !v.is_finite() {
        return Err(Error::Parse { line, msg: format!("non-finite number {t:?}") });
    }
    Ok(v)
}
