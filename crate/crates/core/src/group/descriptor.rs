use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::Error;

/// Structured name of a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Cyclic(usize),
    AbelianProduct(Vec<usize>),
    Symmetric(usize),
    Alternating(usize),
    /// Symmetries of the regular `n`-gon, order `2n`.
    Dihedral(usize),
    Quaternion8,
    CayleyTable,
    SpecialLinear { n: usize, p: usize },
    GeneralLinear { n: usize, p: usize },
    /// A subgroup of another group, viewed as a group in its own right.
    Subgroup { parent: Box<Descriptor>, order: usize },
}

/// A parsed command-line group argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Named(Descriptor),
    CayleyFile(PathBuf),
}

impl Descriptor {
    pub fn is_matrix_group(&self) -> bool {
        matches!(
            self,
            Descriptor::SpecialLinear { .. } | Descriptor::GeneralLinear { .. }
        )
    }

    /// File-system friendly key; `None` for groups that are not uniquely
    /// determined by their descriptor.
    pub fn cache_key(&self) -> Option<String> {
        match self {
            Descriptor::CayleyTable | Descriptor::Subgroup { .. } => None,
            other => Some(
                other
                    .to_string()
                    .chars()
                    .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
                    .collect(),
            ),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Cyclic(n) => write!(f, "cyclic:{n}"),
            Descriptor::AbelianProduct(ns) => {
                let parts: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                write!(f, "abelian:{}", parts.join("x"))
            }
            Descriptor::Symmetric(n) => write!(f, "sym:{n}"),
            Descriptor::Alternating(n) => write!(f, "alt:{n}"),
            Descriptor::Dihedral(n) => write!(f, "dihedral:{n}"),
            Descriptor::Quaternion8 => write!(f, "q8"),
            Descriptor::CayleyTable => write!(f, "cayley"),
            Descriptor::SpecialLinear { n, p } => write!(f, "sl:{n},{p}"),
            Descriptor::GeneralLinear { n, p } => write!(f, "gl:{n},{p}"),
            Descriptor::Subgroup { parent, order } => write!(f, "sub({parent})[{order}]"),
        }
    }
}

fn parse_usize(s: &str, whole: &str) -> Result<usize, Error> {
    s.trim()
        .parse()
        .map_err(|_| Error::UnsupportedDescriptor(whole.to_string()))
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("cayley:") {
            return Ok(GroupSpec::CayleyFile(PathBuf::from(path)));
        }
        Ok(GroupSpec::Named(s.parse()?))
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::UnsupportedDescriptor(s.to_string());
        if s == "q8" {
            return Ok(Descriptor::Quaternion8);
        }
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let matrix_args = |args: &str| -> Result<(usize, usize), Error> {
            let (n, p) = args.split_once(',').ok_or_else(bad)?;
            Ok((parse_usize(n, s)?, parse_usize(p, s)?))
        };
        match kind {
            "cyclic" => Ok(Descriptor::Cyclic(parse_usize(args, s)?)),
            "abelian" => {
                let ns = args
                    .split('x')
                    .map(|t| parse_usize(t, s))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Descriptor::AbelianProduct(ns))
            }
            "sym" => Ok(Descriptor::Symmetric(parse_usize(args, s)?)),
            "alt" => Ok(Descriptor::Alternating(parse_usize(args, s)?)),
            "dihedral" => Ok(Descriptor::Dihedral(parse_usize(args, s)?)),
            "sl" => {
                let (n, p) = matrix_args(args)?;
                Ok(Descriptor::SpecialLinear { n, p })
            }
            "gl" => {
                let (n, p) = matrix_args(args)?;
                Ok(Descriptor::GeneralLinear { n, p })
            }
            // family-style shorthand, e.g. `sl2:p=5`
            "sl2" | "gl2" | "sl3" | "gl3" => {
                let p = args.strip_prefix("p=").ok_or_else(bad)?;
                let p = parse_usize(p, s)?;
                let n = if kind.ends_with('2') { 2 } else { 3 };
                if kind.starts_with("sl") {
                    Ok(Descriptor::SpecialLinear { n, p })
                } else {
                    Ok(Descriptor::GeneralLinear { n, p })
                }
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_parse_round_trip() {
        for s in [
            "cyclic:12",
            "abelian:2x2x3",
            "sym:4",
            "alt:5",
            "dihedral:7",
            "q8",
            "sl:2,5",
            "gl:3,2",
        ] {
            let d: Descriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn shorthand_and_cayley() {
        assert_eq!(
            "sl2:p=3".parse::<Descriptor>().unwrap(),
            Descriptor::SpecialLinear { n: 2, p: 3 }
        );
        assert_eq!(
            "cayley:/tmp/t.txt".parse::<GroupSpec>().unwrap(),
            GroupSpec::CayleyFile(PathBuf::from("/tmp/t.txt"))
        );
        assert!("tetris:4".parse::<Descriptor>().is_err());
        assert!("cyclic:x".parse::<Descriptor>().is_err());
    }
}
