//! Published bound tables, shipped as data files.
//!
//! `table1.csv` lists bounds on codes with minimum generalized distance
//! (`n, m, sdp, classical, method`), `table2.csv` bounds on even codes with
//! minimum radius (`n, m, sdp, classical`).

use crate::classical::Method;
use crate::error::{Error, Result};

pub const TABLE1_CSV: &str = include_str!("../data/table1.csv");
pub const TABLE2_CSV: &str = include_str!("../data/table2.csv");

/// SHA-256 of the data files as committed.
pub const TABLE1_SHA256: &str = "177d0513e04b5d9e18a83a42f413399d87e5a0735a241d39bfaeffb184f5eee3";
pub const TABLE2_SHA256: &str = "3fec41516027c3f020870a1754ec3bc942dd8dee0eab3843fc9f79dbd7fbbae6";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceCell {
    pub n: usize,
    pub m: usize,
    pub sdp: u128,
    pub classical: u128,
    /// Winning classical method; absent in the radius table.
    pub method: Option<Method>,
}

fn parse(text: &str, with_method: bool) -> Result<Vec<ReferenceCell>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != if with_method { 5 } else { 4 } {
            return Err(bad("wrong field count"));
        }
        let num = |s: &str| s.parse::<u128>().map_err(|e| bad(&e.to_string()));
        let method = if with_method {
            let sup: u8 = f[4].parse().map_err(|_| bad("bad method superscript"))?;
            Some(Method::from_superscript(sup).ok_or_else(|| bad("unknown method superscript"))?)
        } else {
            None
        };
        out.push(ReferenceCell {
            n: num(f[0])? as usize,
            m: num(f[1])? as usize,
            sdp: num(f[2])?,
            classical: num(f[3])?,
            method,
        });
    }
    Ok(out)
}

/// Cells of the generalized-distance table, rows `n = 10..=20`, `m = 4..n`.
pub fn table1() -> Vec<ReferenceCell> {
    parse(TABLE1_CSV, true).expect("embedded table 1 parses")
}

/// Cells of the even-code radius table, rows `n = 10..=19`.
pub fn table2() -> Vec<ReferenceCell> {
    parse(TABLE2_CSV, false).expect("embedded table 2 parses")
}

pub fn lookup(table: &[ReferenceCell], n: usize, m: usize) -> Option<ReferenceCell> {
    table.iter().copied().find(|c| c.n == n && c.m == m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let t1 = table1();
        assert_eq!(t1.len(), (10..=20).map(|n| n - 4).sum::<usize>());
        assert!(t1.iter().all(|c| c.m >= 4 && c.m < c.n));
        let t2 = table2();
        assert_eq!(t2.len(), 45);
        assert_eq!(lookup(&t2, 11, 4).map(|c| (c.sdp, c.classical)), Some((5, 11)));
        let c = lookup(&t1, 10, 4).unwrap();
        assert_eq!((c.sdp, c.classical, c.method), (170, 186, Some(Method::Hamming)));
    }

    #[test]
    fn checksums() {
        use sha2::{Digest, Sha256};
        assert_eq!(hex::encode(Sha256::digest(TABLE1_CSV.as_bytes())), TABLE1_SHA256);
        assert_eq!(hex::encode(Sha256::digest(TABLE2_CSV.as_bytes())), TABLE2_SHA256);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(matches!(parse("h\n1,2,3\n", false), Err(Error::Parse { line: 2, .. })));
        assert!(parse("h\n1,2,3,4,9\n", true).is_err());
    }
}
