//! Finite groups on dense element indices.
//!
//! Every group numbers its elements `0..order` with `0` the identity. The
//! multiplication law is either a materialized Cayley table or a structured
//! rule (mixed-radix addition, dihedral rule, permutation or matrix product
//! followed by an index lookup, or the law of a parent group restricted to a
//! subgroup).

mod construct;
mod descriptor;
mod matrix;
mod product;
mod search;
mod subgroup;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

pub use construct::{build_cayley_group, construct_named, load_group, parse_cayley_file};
pub use descriptor::{Descriptor, GroupSpec};
pub use matrix::{borel_subgroup, ldu_subgroups, FpMatrix};
pub use product::{covering_bound, covering_translates, product_set, CoveringData, FactorizationTable};
pub use search::{
    element_order, find_hk_pair, hall_subgroup, prime_factors, sylow_subgroup, HkPair,
    SearchBudget,
};
pub use subgroup::{right_coset_reps, subgroup_from_members, subgroup_generated, Subgroup};

/// Hard cap on the order of any constructed group.
pub const GROUP_ORDER_CAP: usize = 20_000;

/// Groups up to this order get a materialized multiplication table.
pub const TABLE_CAP: usize = 2_600;

#[derive(Debug, Clone)]
pub(crate) enum Law {
    Table(Vec<u32>),
    /// Direct product of cyclic groups, first factor most significant.
    Abelian(Vec<usize>),
    /// `r^k s^e` stored at `k + n*e`.
    Dihedral(usize),
    Concrete(ConcreteLaw),
    Sub(SubLaw),
}

#[derive(Debug, Clone)]
pub(crate) struct ConcreteLaw {
    pub kind: ConcreteKind,
    pub elems: Vec<Vec<u8>>,
    pub index: HashMap<u64, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ConcreteKind {
    /// Permutations of `0..n`; `(a*b)[i] = a[b[i]]`.
    Perm { n: usize },
    /// `n x n` matrices over `F_p`, row-major.
    Matrix { n: usize, p: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct SubLaw {
    pub parent: Arc<FiniteGroup>,
    pub members: Vec<usize>,
    pub local: Vec<u32>,
}

impl ConcreteKind {
    fn base(self) -> u64 {
        match self {
            ConcreteKind::Perm { n } => n as u64,
            ConcreteKind::Matrix { p, .. } => p as u64,
        }
    }

    pub(crate) fn encode(self, e: &[u8]) -> u64 {
        let b = self.base();
        e.iter().fold(0u64, |acc, &x| acc * b + x as u64)
    }

    pub(crate) fn compose(self, a: &[u8], b: &[u8]) -> Vec<u8> {
        match self {
            ConcreteKind::Perm { .. } => b.iter().map(|&i| a[i as usize]).collect(),
            ConcreteKind::Matrix { n, p } => {
                let mut out = vec![0u8; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let mut s = 0usize;
                        for k in 0..n {
                            s += a[i * n + k] as usize * b[k * n + j] as usize;
                        }
                        out[i * n + j] = (s % p) as u8;
                    }
                }
                out
            }
        }
    }

    pub(crate) fn invert(self, a: &[u8]) -> Vec<u8> {
        match self {
            ConcreteKind::Perm { .. } => {
                let mut out = vec![0u8; a.len()];
                for (i, &x) in a.iter().enumerate() {
                    out[x as usize] = i as u8;
                }
                out
            }
            ConcreteKind::Matrix { n, p } => matrix::invert_mod_p(a, n, p),
        }
    }
}

impl ConcreteLaw {
    fn mul(&self, a: usize, b: usize) -> usize {
        let c = self.kind.compose(&self.elems[a], &self.elems[b]);
        self.index[&self.kind.encode(&c)] as usize
    }
}

/// A finite group with canonical dense indexing.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    descriptor: Descriptor,
    order: usize,
    law: Law,
    table: Option<Vec<u32>>,
    inv: Vec<u32>,
    generators: Vec<usize>,
    class_of: Vec<u32>,
    classes: Vec<Vec<usize>>,
    abelian: bool,
}

impl FiniteGroup {
    /// Assembles a group from a law whose identity is index 0. Inverses,
    /// a generating set and conjugacy classes are derived here.
    pub(crate) fn from_law(descriptor: Descriptor, order: usize, law: Law) -> FiniteGroup {
        let mut g = FiniteGroup {
            descriptor,
            order,
            law,
            table: None,
            inv: Vec::new(),
            generators: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
            abelian: true,
        };
        g.inv = g.compute_inverses();
        g.generators = g.greedy_generators();
        g.abelian = g
            .generators
            .iter()
            .all(|&a| g.generators.iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
        let (class_of, classes) = g.compute_classes();
        g.class_of = class_of;
        g.classes = classes;
        g
    }

    /// Replaces a structured law by a table when the group is small enough.
    pub(crate) fn materialize_table(mut self) -> FiniteGroup {
        if self.order <= TABLE_CAP && self.table.is_none() && !matches!(self.law, Law::Table(_)) {
            let n = self.order;
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = self.mul(a, b) as u32;
                }
            }
            self.table = Some(t);
        }
        self
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = &self.table {
            return t[a * self.order + b] as usize;
        }
        match &self.law {
            Law::Table(t) => t[a * self.order + b] as usize,
            Law::Abelian(moduli) => {
                let mut out = 0usize;
                let (mut x, mut y, mut scale) = (a, b, 1usize);
                for &m in moduli.iter().rev() {
                    out += ((x % m + y % m) % m) * scale;
                    x /= m;
                    y /= m;
                    scale *= m;
                }
                out
            }
            Law::Dihedral(n) => {
                let (k1, e1) = (a % n, a / n);
                let (k2, e2) = (b % n, b / n);
                let k = if e1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
                k + n * ((e1 + e2) % 2)
            }
            Law::Concrete(c) => c.mul(a, b),
            Law::Sub(s) => s.local[s.parent.mul(s.members[a], s.members[b])] as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// Conjugacy classes, ordered by their smallest member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g] as usize
    }

    /// Permutation or matrix entries of an element, for concrete groups.
    pub fn concrete_element(&self, g: usize) -> Option<&[u8]> {
        match &self.law {
            Law::Concrete(c) => Some(&c.elems[g]),
            _ => None,
        }
    }

    pub(crate) fn concrete_kind(&self) -> Option<ConcreteKind> {
        match &self.law {
            Law::Concrete(c) => Some(c.kind),
            _ => None,
        }
    }

    /// Looks up the index of a concrete element, if it belongs to the group.
    pub fn index_of_concrete(&self, e: &[u8]) -> Option<usize> {
        match &self.law {
            Law::Concrete(c) => c.index.get(&c.kind.encode(e)).map(|&i| i as usize),
            _ => None,
        }
    }

    /// Dense Cayley table (row `a`, column `b` holds `a*b`).
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Closure of a set of elements under multiplication.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Checks identity, inverse and associativity laws. Associativity is
    /// exhaustive up to order 512 and sampled on `samples` triples above.
    pub fn check_axioms(&self, samples: usize) -> Result<(), String> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(format!("index 0 is not an identity for {a}"));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(format!("inverse law fails at {a}"));
            }
        }
        let check = |a: usize, b: usize, c: usize| {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(format!("associativity fails at ({a}, {b}, {c})"))
            } else {
                Ok(())
            }
        };
        if n <= 512 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(format!("associativity fails at ({a}, {b}, {c})"));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % n as u64) as usize
            };
            for _ in 0..samples {
                check(next(), next(), next())?;
            }
        }
        if self.closure(&self.generators).len() != n {
            return Err("generators do not generate the group".into());
        }
        Ok(())
    }

    fn compute_inverses(&self) -> Vec<u32> {
        let n = self.order;
        match &self.law {
            Law::Table(t) => (0..n)
                .map(|a| {
                    t[a * n..(a + 1) * n]
                        .iter()
                        .position(|&x| x == 0)
                        .expect("every row of a group table contains the identity") as u32
                })
                .collect(),
            Law::Abelian(moduli) => (0..n)
                .map(|a| {
                    let (mut x, mut out, mut scale) = (a, 0usize, 1usize);
                    for &m in moduli.iter().rev() {
                        out += ((m - x % m) % m) * scale;
                        x /= m;
                        scale *= m;
                    }
                    out as u32
                })
                .collect(),
            Law::Dihedral(m) => (0..n)
                .map(|a| if a < *m { ((m - a) % m) as u32 } else { a as u32 })
                .collect(),
            Law::Concrete(c) => c
                .elems
                .iter()
                .map(|e| c.index[&c.kind.encode(&c.kind.invert(e))])
                .collect(),
            Law::Sub(s) => s
                .members
                .iter()
                .map(|&m| s.local[s.parent.inv(m)])
                .collect(),
        }
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let n = self.order;
        let mut gens = Vec::new();
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut covered = 1usize;
        for g in 1..n {
            if covered == n {
                break;
            }
            if inside[g] {
                continue;
            }
            gens.push(g);
            let members = self.closure(&gens);
            covered = members.len();
            for m in members {
                inside[m] = true;
            }
        }
        gens
    }

    fn compute_classes(&self) -> (Vec<u32>, Vec<Vec<usize>>) {
        let n = self.order;
        let mut class_of = vec![u32::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let gen_inv: Vec<(usize, usize)> =
            self.generators.iter().map(|&s| (s, self.inv(s))).collect();
        for g in 0..n {
            if class_of[g] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            let mut members = vec![g];
            class_of[g] = id;
            let mut queue = VecDeque::from([g]);
            while let Some(x) = queue.pop_front() {
                for &(s, si) in &gen_inv {
                    let y = self.mul(self.mul(s, x), si);
                    if class_of[y] == u32::MAX {
                        class_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        (class_of, classes)
    }
}
