use num_bigint::BigInt;

use super::relaxation::LasserreRelaxation;
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::poly::MPoly;

const MAX_DENOMINATOR: i64 = 1_000_000;

/// One line `matno block i j value` of the sparse format (1-based).
#[derive(Clone, Debug, PartialEq)]
pub struct SdpaEntry {
    pub matno: usize,
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// A block-diagonal semidefinite program `sum_k y_k F_k - F_0 psd`,
/// minimizing `sum_k c_k y_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpaProblem {
    pub m: usize,
    /// Negative entries denote diagonal blocks.
    pub block_sizes: Vec<i64>,
    pub objective: Vec<f64>,
    pub entries: Vec<SdpaEntry>,
}

impl SdpaProblem {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n{}\n", self.m, self.block_sizes.len()));
        out.push_str(&join(self.block_sizes.iter()));
        out.push('\n');
        out.push_str(&join(self.objective.iter()));
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!("{} {} {} {} {}\n", e.matno, e.block, e.i, e.j, e.value));
        }
        out
    }
}

fn join<T: std::fmt::Display>(it: impl Iterator<Item = T>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn to_decimal(r: &Rat) -> Result<f64> {
    if r.denom() > &BigInt::from(MAX_DENOMINATOR) {
        return Err(Error::Input(format!("coefficient {r} has a denominator above {MAX_DENOMINATOR}")));
    }
    Ok(r.to_f64())
}

/// The relaxation as an SDP with the given objective.
pub fn to_sdpa(rel: &LasserreRelaxation, objective: &MPoly) -> Result<SdpaProblem> {
    if objective.nvars() != rel.n {
        return Err(Error::Dimension(format!("objective in {} variables, expected {}", objective.nvars(), rel.n)));
    }
    if objective.total_degree().is_some_and(|k| k > rel.d) {
        return Err(Error::Degree(format!("objective degree exceeds {}", rel.d)));
    }
    let m = rel.num_vars();
    let lin = rel.linearize(objective)?;
    let objective = (1..=m).map(|k| lin.get(&k).map_or(Ok(0.0), to_decimal)).collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::new();
    for matno in 0..=m {
        for (b, block) in rel.blocks.iter().enumerate() {
            for i in 0..block.size() {
                for j in i..block.size() {
                    let Some(c) = block.entry(i, j).get(&matno) else { continue };
                    // F_0 carries the negated constant part
                    let v = if matno == 0 { -c.clone() } else { c.clone() };
                    entries.push(SdpaEntry { matno, block: b + 1, i: i + 1, j: j + 1, value: to_decimal(&v)? });
                }
            }
        }
    }
    Ok(SdpaProblem { m, block_sizes: rel.block_sizes().iter().map(|&k| k as i64).collect(), objective, entries })
}

/// Sparse SDPA text (`.dat-s`), deterministic for given inputs.
pub fn emit_sdpa(rel: &LasserreRelaxation, objective: &MPoly) -> Result<String> {
    Ok(to_sdpa(rel, objective)?.render())
}

/// Reads the sparse format written by [`emit_sdpa`]. Lines starting with
/// `"` or `*` are comments; `{`, `}`, `(`, `)` and `,` count as spaces.
pub fn parse_sdpa(text: &str) -> Result<SdpaProblem> {
    let mut lines = text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'))
        .map(|l| l.replace(['{', '}', '(', ')', ','], " "));
    let mut next = |what: &str| lines.next().ok_or_else(|| Error::Input(format!("missing {what} line")));
    let m: usize = first_token(&next("variable count")?)?;
    let nblocks: usize = first_token(&next("block count")?)?;
    let block_sizes: Vec<i64> = tokens(&next("block sizes")?)?;
    if block_sizes.len() != nblocks {
        return Err(Error::Input(format!("expected {nblocks} block sizes, found {}", block_sizes.len())));
    }
    let objective: Vec<f64> = tokens(&next("objective")?)?;
    if objective.len() != m {
        return Err(Error::Input(format!("expected {m} objective coefficients, found {}", objective.len())));
    }
    let mut entries = Vec::new();
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(Error::Input(format!("malformed entry line `{line}`")));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| Error::Input(format!("bad index `{s}`")));
        let value = parts[4].parse::<f64>().map_err(|_| Error::Input(format!("bad value `{}`", parts[4])))?;
        let e = SdpaEntry { matno: int(parts[0])?, block: int(parts[1])?, i: int(parts[2])?, j: int(parts[3])?, value };
        let size = block_sizes.get(e.block.wrapping_sub(1)).map(|s| s.unsigned_abs() as usize);
        if e.matno > m || size.is_none_or(|k| e.i == 0 || e.j == 0 || e.i > k || e.j > k) {
            return Err(Error::Input(format!("entry out of range `{line}`")));
        }
        entries.push(e);
    }
    Ok(SdpaProblem { m, block_sizes, objective, entries })
}

fn tokens<T: std::str::FromStr>(line: &str) -> Result<Vec<T>> {
    line.split_whitespace().map(|t| t.parse().map_err(|_| Error::Input(format!("bad token `{t}`")))).collect()
}

fn first_token<T: std::str::FromStr>(line: &str) -> Result<T> {
    tokens::<T>(line)?.into_iter().next().ok_or_else(|| Error::Input("empty line".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasserre::build_relaxation;
    use crate::poly::parse_poly;

    fn tangent() -> LasserreRelaxation {
        let gs = vec![parse_poly("1 - x1 + x2", 2).unwrap(), parse_poly("1 - x1^4 - x2^4", 2).unwrap()];
        build_relaxation(2, &gs, 4).unwrap()
    }

    #[test]
    fn header_lines() {
        let text = emit_sdpa(&tangent(), &parse_poly("x1", 2).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "14");
        assert_eq!(lines[1], "3");
        assert_eq!(lines[2], "6 3 1");
        assert_eq!(lines[3], "1 0 0 0 0 0 0 0 0 0 0 0 0 0");
        // F_0: constants -1 at (1,1) of the moment block, the first localizing
        // entry and the last block
        assert_eq!(&lines[4..7], ["0 1 1 1 -1", "0 2 1 1 -1", "0 3 1 1 -1"]);
    }

    #[test]
    fn localizing_block_lines() {
        // size-3 block of 1 - x1 + x2, encoded by hand
        let text = emit_sdpa(&tangent(), &parse_poly("x1", 2).unwrap()).unwrap();
        let mut got: Vec<&str> = text.lines().skip(4).filter(|l| l.split(' ').nth(1) == Some("2")).collect();
        got.sort();
        let mut expected = vec![
            "0 2 1 1 -1", "1 2 1 1 -1", "2 2 1 1 1", "1 2 1 2 1", "3 2 1 2 -1", "4 2 1 2 1", "2 2 1 3 1",
            "4 2 1 3 -1", "5 2 1 3 1", "3 2 2 2 1", "6 2 2 2 -1", "7 2 2 2 1", "4 2 2 3 1", "7 2 2 3 -1",
            "8 2 2 3 1", "5 2 3 3 1", "8 2 3 3 -1", "9 2 3 3 1",
        ];
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn round_trip() {
        let rel = tangent();
        let p = to_sdpa(&rel, &parse_poly("x1 - 1/4*x2^2", 2).unwrap()).unwrap();
        assert_eq!(parse_sdpa(&p.render()).unwrap(), p);
    }

    #[test]
    fn small_relaxation() {
        let rel = build_relaxation(1, &[], 2).unwrap();
        let p = to_sdpa(&rel, &parse_poly("x", 1).unwrap()).unwrap();
        assert_eq!((p.m, p.block_sizes.clone()), (2, vec![2]));
        assert_eq!(p.objective, vec![1.0, 0.0]);
    }

    #[test]
    fn rejects_bad_objectives() {
        let rel = build_relaxation(1, &[], 2).unwrap();
        assert!(matches!(emit_sdpa(&rel, &parse_poly("x^3", 1).unwrap()), Err(Error::Degree(_))));
        assert!(matches!(emit_sdpa(&rel, &parse_poly("1/1000003*x", 1).unwrap()), Err(Error::Input(_))));
        assert!(parse_sdpa("2\n1\n2\n1 0\n0 1 3 1 1\n").is_err());
    }
}
