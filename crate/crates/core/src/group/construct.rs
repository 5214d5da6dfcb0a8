use std::collections::HashMap;
use std::sync::Arc;

use super::matrix::det_mod_p;
use super::{
    ConcreteKind, ConcreteLaw, Descriptor, FiniteGroup, GroupSpec, Law, GROUP_ORDER_CAP,
};
use crate::error::{Error, Result};

/// Validates a Cayley table and turns it into a group. If the identity is
/// not at index 0 it is swapped there.
pub fn build_cayley_group(table: &[Vec<usize>]) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty table".into()));
    }
    if n > GROUP_ORDER_CAP {
        return Err(Error::CapExceeded { order: n, cap: GROUP_ORDER_CAP });
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotAGroup(format!("row {i} has length {}", row.len())));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(Error::NotAGroup(format!("entry {x} out of range in row {i}")));
        }
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
        .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    for a in 0..n {
        let mut row_seen = vec![false; n];
        let mut col_seen = vec![false; n];
        for b in 0..n {
            row_seen[table[a][b]] = true;
            col_seen[table[b][a]] = true;
        }
        if !row_seen.iter().all(|&s| s) || !col_seen.iter().all(|&s| s) {
            return Err(Error::NotAGroup(format!("element {a} has no inverse")));
        }
    }
    // relabel e <-> 0
    let relabel = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut flat = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            flat[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u32;
        }
    }
    let group = FiniteGroup::from_law(Descriptor::CayleyTable, n, Law::Table(flat));
    group.check_axioms(100_000).map_err(Error::NotAGroup)?;
    Ok(group)
}

/// Parses the text Cayley format: first line the order, then the table in
/// row-major order, whitespace separated.
pub fn parse_cayley_file(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(Error::ParseError { line: 1, msg: "empty file".into() })?;
    let n: usize = first.trim().parse().map_err(|_| Error::ParseError {
        line: 1,
        msg: format!("bad order {first:?}"),
    })?;
    let mut entries = Vec::with_capacity(n * n);
    for (i, line) in lines {
        for tok in line.split_whitespace() {
            entries.push(tok.parse::<usize>().map_err(|_| Error::ParseError {
                line: i + 1,
                msg: format!("bad entry {tok:?}"),
            })?);
        }
    }
    if entries.len() != n * n {
        return Err(Error::ParseError {
            line: text.lines().count(),
            msg: format!("expected {} entries, found {}", n * n, entries.len()),
        });
    }
    Ok(entries.chunks(n).map(|c| c.to_vec()).collect())
}

/// Builds a group from a command-line spec (`sym:4`, `cayley:<path>`, ...).
pub fn load_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    match spec.parse::<GroupSpec>()? {
        GroupSpec::Named(d) => Ok(Arc::new(construct_named(&d)?)),
        GroupSpec::CayleyFile(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(Arc::new(build_cayley_group(&parse_cayley_file(&text)?)?))
        }
    }
}

pub(crate) fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn check_cap(order: usize) -> Result<()> {
    if order > GROUP_ORDER_CAP {
        Err(Error::CapExceeded { order, cap: GROUP_ORDER_CAP })
    } else {
        Ok(())
    }
}

/// Constructs one of the named group families.
pub fn construct_named(d: &Descriptor) -> Result<FiniteGroup> {
    let unsupported = || Error::UnsupportedDescriptor(d.to_string());
    let group = match d {
        Descriptor::Cyclic(n) => {
            if *n == 0 {
                return Err(unsupported());
            }
            check_cap(*n)?;
            FiniteGroup::from_law(d.clone(), *n, Law::Abelian(vec![*n]))
        }
        Descriptor::AbelianProduct(ns) => {
            if ns.is_empty() || ns.contains(&0) {
                return Err(unsupported());
            }
            let order = ns
                .iter()
                .try_fold(1usize, |acc, &m| acc.checked_mul(m))
                .ok_or_else(unsupported)?;
            check_cap(order)?;
            FiniteGroup::from_law(d.clone(), order, Law::Abelian(ns.clone()))
        }
        Descriptor::Dihedral(n) => {
            if *n == 0 {
                return Err(unsupported());
            }
            check_cap(2 * n)?;
            FiniteGroup::from_law(d.clone(), 2 * n, Law::Dihedral(*n))
        }
        Descriptor::Quaternion8 => quaternion8(),
        Descriptor::Symmetric(n) | Descriptor::Alternating(n) => {
            if *n == 0 || *n > 8 {
                return Err(unsupported());
            }
            let even_only = matches!(d, Descriptor::Alternating(_));
            let fact: usize = (1..=*n).product();
            let order = if even_only && *n >= 2 { fact / 2 } else { fact };
            check_cap(order)?;
            let elems: Vec<Vec<u8>> = permutations(*n)
                .into_iter()
                .filter(|p| !even_only || parity(p) == 0)
                .collect();
            concrete_group(d.clone(), ConcreteKind::Perm { n: *n }, elems)
        }
        Descriptor::SpecialLinear { n, p } | Descriptor::GeneralLinear { n, p } => {
            if *n == 0 || !is_prime(*p) {
                return Err(unsupported());
            }
            let special = matches!(d, Descriptor::SpecialLinear { .. });
            let mut order = 1usize;
            for i in 0..*n {
                order = order.saturating_mul(p.pow(*n as u32) - p.pow(i as u32));
            }
            if special {
                order /= p - 1;
            }
            check_cap(order)?;
            let size = n * n;
            let total = p.pow(size as u32);
            let mut elems = Vec::with_capacity(order);
            let mut digits = vec![0u8; size];
            for code in 0..total {
                let mut c = code;
                for k in (0..size).rev() {
                    digits[k] = (c % p) as u8;
                    c /= p;
                }
                let det = det_mod_p(&digits, *n, *p);
                if (special && det == 1) || (!special && det != 0) {
                    elems.push(digits.clone());
                }
            }
            let id: Vec<u8> = (0..size).map(|k| u8::from(k / n == k % n)).collect();
            let pos = elems.iter().position(|e| *e == id).expect("identity is invertible");
            let idm = elems.remove(pos);
            elems.insert(0, idm);
            concrete_group(d.clone(), ConcreteKind::Matrix { n: *n, p: *p }, elems)
        }
        Descriptor::CayleyTable | Descriptor::Subgroup { .. } => return Err(unsupported()),
    };
    Ok(group)
}

fn concrete_group(d: Descriptor, kind: ConcreteKind, elems: Vec<Vec<u8>>) -> FiniteGroup {
    let index: HashMap<u64, u32> = elems
        .iter()
        .enumerate()
        .map(|(i, e)| (kind.encode(e), i as u32))
        .collect();
    let order = elems.len();
    FiniteGroup::from_law(d, order, Law::Concrete(ConcreteLaw { kind, elems, index }))
        .materialize_table()
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn parity(p: &[u8]) -> usize {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2
}

/// Elements ordered `1, -1, i, -i, j, -j, k, -k`.
fn quaternion8() -> FiniteGroup {
    // unit products: (u, v) -> (sign, unit) for units 1, i, j, k
    let unit_mul = |u: usize, v: usize| -> (bool, usize) {
        match (u, v) {
            (0, x) | (x, 0) => (false, x),
            (a, b) if a == b => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let mut t = vec![0u32; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (s, u) = unit_mul(a / 2, b / 2);
            let neg = (a % 2 == 1) ^ (b % 2 == 1) ^ s;
            t[a * 8 + b] = (2 * u + usize::from(neg)) as u32;
        }
    }
    FiniteGroup::from_law(Descriptor::Quaternion8, 8, Law::Table(t))
}
