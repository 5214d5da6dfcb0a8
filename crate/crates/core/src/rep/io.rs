use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::{IrrepSet, RepData};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{CMatrix, C64};

const HEADER: &str = "GDFT-IRREPS v1";

/// Serializes a set; floats use the shortest exact round-trip notation.
pub fn irreps_to_string(set: &IrrepSet) -> String {
    let n = set.group().order();
    let mut body = String::new();
    let _ = writeln!(body, "{HEADER}");
    let _ = writeln!(body, "{n}");
    let _ = writeln!(body, "{}", set.len());
    for ir in set.irreps() {
        let _ = writeln!(body, "IRREP {} {}", ir.label(), ir.dim());
        for g in 0..n {
            let _ = write!(body, "{g}");
            for z in ir.matrix(g).as_slice() {
                let _ = write!(body, " {:e} {:e}", z.re, z.im);
            }
            body.push('\n');
        }
    }
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    let _ = writeln!(body, "SHA256 {digest}");
    body
}

pub fn export_irreps(set: &IrrepSet, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, irreps_to_string(set))?;
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError { line, msg: msg.into() }
}

/// Parses the text format for the given group, checking the trailing digest.
pub fn irreps_from_str(text: &str, group: &Arc<FiniteGroup>) -> Result<IrrepSet> {
    let digest_at = text.rfind("SHA256 ").ok_or_else(|| parse_err(text.lines().count(), "missing SHA256 line"))?;
    let (payload, tail) = text.split_at(digest_at);
    let expected = tail.trim_start_matches("SHA256 ").trim().to_string();
    let computed = hex::encode(Sha256::digest(payload.as_bytes()));
    if expected != computed {
        return Err(Error::ChecksumMismatch { expected, computed });
    }
    let mut lines = payload.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| lines.next().ok_or_else(|| parse_err(0, format!("unexpected end of file, wanted {what}")));
    let (ln, h) = next("header")?;
    if h.trim() != HEADER {
        return Err(parse_err(ln, "bad header"));
    }
    let (ln, order) = next("order")?;
    let order: usize = order.trim().parse().map_err(|_| parse_err(ln, "bad order"))?;
    if order != group.order() {
        return Err(parse_err(ln, format!("file is for order {order}, group has order {}", group.order())));
    }
    let (ln, count) = next("irrep count")?;
    let count: usize = count.trim().parse().map_err(|_| parse_err(ln, "bad irrep count"))?;
    let mut reps = Vec::with_capacity(count);
    for _ in 0..count {
        let (ln, head) = next("IRREP line")?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        let dim: usize = match parts.as_slice() {
            ["IRREP", _, d] => d.parse().map_err(|_| parse_err(ln, "bad dimension"))?,
            _ => return Err(parse_err(ln, "expected IRREP <label> <dim>")),
        };
        let mut mats = Vec::with_capacity(order);
        for g in 0..order {
            let (ln, row) = next("matrix line")?;
            let mut it = row.split_whitespace();
            let idx: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| parse_err(ln, "bad element index"))?;
            if idx != g {
                return Err(parse_err(ln, format!("expected element {g}, found {idx}")));
            }
            let vals: Vec<f64> = it
                .map(|t| t.parse::<f64>().map_err(|_| parse_err(ln, format!("bad number {t}"))))
                .collect::<Result<_>>()?;
            if vals.len() != 2 * dim * dim {
                return Err(parse_err(ln, format!("expected {} numbers, found {}", 2 * dim * dim, vals.len())));
            }
            let data = vals.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
            mats.push(CMatrix::from_vec(dim, dim, data)?);
        }
        reps.push(RepData::Table(mats));
    }
    if let Some((ln, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(ln, format!("trailing content: {extra}")));
    }
    IrrepSet::new(group.clone(), reps)
}

pub fn import_irreps(path: &Path, group: &Arc<FiniteGroup>) -> Result<IrrepSet> {
    let text = std::fs::read_to_string(path)?;
    irreps_from_str(&text, group)
}
