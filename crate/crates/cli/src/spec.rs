//! Corpus and family specifications.
//!
//! A spec is either `default`, a family such as `sl2:p=3,5,7` or
//! `cyclic:n=4,8,16`, or a `;`-separated list of group descriptors.

use crate::error::{CliError, Result};

/// The standard verification corpus.
pub fn default_corpus() -> Vec<String> {
    let mut out: Vec<String> = (1..=64).map(|n| format!("cyclic:{n}")).collect();
    for k in 1..=6 {
        out.push(format!("abelian:{}", vec!["2"; k].join("x")));
    }
    for s in ["sym:3", "sym:4", "alt:4", "alt:5", "q8", "sl:2,3", "sl:2,5", "gl:2,3"] {
        out.push(s.to_string());
    }
    out.extend((4..=10).map(|n| format!("dihedral:{n}")));
    out
}

fn expand_family(kind: &str, values: &str) -> Result<Vec<String>> {
    let bad = || CliError::BadSpec(format!("{kind}:{values}"));
    let (param, list) = values.split_once('=').ok_or_else(bad)?;
    let nums: Vec<usize> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let render = |v: usize| -> Result<String> {
        Ok(match (kind, param) {
            ("sl2", "p") => format!("sl:2,{v}"),
            ("gl2", "p") => format!("gl:2,{v}"),
            ("sl3", "p") => format!("sl:3,{v}"),
            ("gl3", "p") => format!("gl:3,{v}"),
            ("cyclic" | "sym" | "alt" | "dihedral", "n") => format!("{kind}:{v}"),
            _ => return Err(bad()),
        })
    };
    nums.into_iter().map(render).collect()
}

/// Expands a spec into group descriptors.
pub fn expand(spec: &str) -> Result<Vec<String>> {
    let spec = spec.trim();
    if spec == "default" {
        return Ok(default_corpus());
    }
    if let Some((kind, rest)) = spec.split_once(':') {
        if rest.contains('=') && !spec.contains(';') {
            return expand_family(kind, rest);
        }
    }
    Ok(spec.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
}
