use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{CMatrix, C64};

/// Full tables are kept when `|G| * Σ dim²` stays below this many scalars.
pub const TABLE_SCALAR_CAP: usize = 1 << 26;

/// Tolerance used when ordering characters.
const ORDER_TOL: f64 = 1e-6;

/// Breadth-first words in the generators: `g = parent(g) * s`.
#[derive(Debug)]
pub(crate) struct WordTree {
    parent: Vec<(u32, u32)>,
}

impl WordTree {
    fn new(group: &FiniteGroup) -> WordTree {
        let n = group.order();
        let mut parent = vec![(u32::MAX, u32::MAX); n];
        parent[0] = (0, u32::MAX);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (si, &s) in group.generators().iter().enumerate() {
                let y = group.mul(x, s);
                if parent[y].0 == u32::MAX {
                    parent[y] = (x as u32, si as u32);
                    queue.push_back(y);
                }
            }
        }
        WordTree { parent }
    }
}

/// A matrix representation `g -> ρ(g)`. Matrices are either all present or
/// evaluated on demand from generator images and memoized.
#[derive(Debug)]
pub struct Irrep {
    label: usize,
    dim: usize,
    mats: Vec<OnceLock<CMatrix>>,
    gen_mats: Vec<CMatrix>,
    words: Arc<WordTree>,
    character: Vec<C64>,
}

impl Clone for Irrep {
    fn clone(&self) -> Self {
        Irrep {
            label: self.label,
            dim: self.dim,
            mats: self
                .mats
                .iter()
                .map(|m| {
                    let cell = OnceLock::new();
                    if let Some(x) = m.get() {
                        let _ = cell.set(x.clone());
                    }
                    cell
                })
                .collect(),
            gen_mats: self.gen_mats.clone(),
            words: self.words.clone(),
            character: self.character.clone(),
        }
    }
}

impl Irrep {
    pub fn label(&self) -> usize {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ρ(g)`
    pub fn matrix(&self, g: usize) -> &CMatrix {
        if let Some(m) = self.mats[g].get() {
            return m;
        }
        // walk up to a memoized ancestor, then multiply back down
        let mut chain = vec![g];
        let mut x = g;
        while self.mats[x].get().is_none() {
            x = self.words.parent[x].0 as usize;
            chain.push(x);
        }
        chain.pop();
        for &y in chain.iter().rev() {
            let (p, s) = self.words.parent[y];
            let m = self.mats[p as usize].get().expect("ancestor evaluated").mul_plain(&self.gen_mats[s as usize]);
            let _ = self.mats[y].set(m);
        }
        self.mats[g].get().expect("just evaluated")
    }

    /// `χ(g)`, read from the class table.
    pub fn chi(&self, group: &FiniteGroup, g: usize) -> C64 {
        self.character[group.class_of(g)]
    }

    /// Character values per conjugacy class.
    pub fn character(&self) -> &[C64] {
        &self.character
    }

    pub fn is_materialized(&self) -> bool {
        self.mats.iter().all(|m| m.get().is_some())
    }
}

/// A complete set of irreducible representations of a group in canonical
/// order: ascending dimension, then characters compared class by class
/// (larger real part first, then larger imaginary part).
#[derive(Debug, Clone)]
pub struct IrrepSet {
    group: Arc<FiniteGroup>,
    irreps: Vec<Irrep>,
    offsets: Vec<usize>,
}

fn cmp_value(a: C64, b: C64) -> Ordering {
    if (a.re - b.re).abs() > ORDER_TOL {
        return b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal);
    }
    if (a.im - b.im).abs() > ORDER_TOL {
        return b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal);
    }
    Ordering::Equal
}

fn cmp_irreps(a: &Irrep, b: &Irrep) -> Ordering {
    a.dim.cmp(&b.dim).then_with(|| {
        a.character
            .iter()
            .zip(&b.character)
            .map(|(&x, &y)| cmp_value(x, y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Raw data of one representation before it joins a set.
#[derive(Debug, Clone)]
pub enum RepData {
    /// `ρ(g)` for every element.
    Table(Vec<CMatrix>),
    /// Images of `group.generators()` in order.
    Generators(Vec<CMatrix>),
}

impl IrrepSet {
    /// Assembles and canonically orders a set of representations. Tables are
    /// materialized when the total size permits.
    pub fn new(group: Arc<FiniteGroup>, reps: Vec<RepData>) -> Result<IrrepSet> {
        let n = group.order();
        let words = Arc::new(WordTree::new(&group));
        let mut total = 0usize;
        let mut irreps = Vec::with_capacity(reps.len());
        for rep in reps {
            let (dim, mats, gen_mats) = match rep {
                RepData::Table(t) => {
                    if t.len() != n {
                        return Err(Error::ShapeMismatch(format!("{} matrices for order {n}", t.len())));
                    }
                    let d = t[0].rows();
                    if t.iter().any(|m| m.rows() != d || m.cols() != d) {
                        return Err(Error::ShapeMismatch("matrices of differing shapes".into()));
                    }
                    let gen_mats = group.generators().iter().map(|&s| t[s].clone()).collect();
                    let mats: Vec<OnceLock<CMatrix>> = t.into_iter().map(OnceLock::from).collect();
                    (d, mats, gen_mats)
                }
                RepData::Generators(gs) => {
                    if gs.len() != group.generators().len() {
                        return Err(Error::ShapeMismatch("one matrix per generator expected".into()));
                    }
                    let d = gs.first().map_or(1, CMatrix::rows);
                    let mats: Vec<OnceLock<CMatrix>> = (0..n).map(|_| OnceLock::new()).collect();
                    let _ = mats[0].set(CMatrix::identity(d));
                    (d, mats, gs)
                }
            };
            total += dim * dim;
            irreps.push(Irrep { label: 0, dim, mats, gen_mats, words: words.clone(), character: Vec::new() });
        }
        let materialize = n.saturating_mul(total) <= TABLE_SCALAR_CAP;
        for ir in &mut irreps {
            if materialize {
                for g in 0..n {
                    ir.matrix(g);
                }
            }
            ir.character = group.classes().iter().map(|c| ir.matrix(c[0]).trace()).collect();
        }
        irreps.sort_by(cmp_irreps);
        for (i, ir) in irreps.iter_mut().enumerate() {
            ir.label = i;
        }
        let mut offsets = Vec::with_capacity(irreps.len());
        let mut off = 0;
        for ir in &irreps {
            offsets.push(off);
            off += ir.dim * ir.dim;
        }
        Ok(IrrepSet { group, irreps, offsets })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(Irrep::dim).collect()
    }

    /// `Σ dim²`
    pub fn sum_of_squares(&self) -> usize {
        self.irreps.iter().map(|r| r.dim * r.dim).sum()
    }

    /// Start of each block in the flattened Fourier layout.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn max_dim(&self) -> usize {
        self.irreps.iter().map(Irrep::dim).max().unwrap_or(0)
    }

    pub fn check_complete(&self) -> Result<()> {
        let sum = self.sum_of_squares();
        if sum != self.group.order() {
            return Err(Error::IncompleteIrrepSet { sum, order: self.group.order() });
        }
        Ok(())
    }
}

/// Runs the homomorphism rule over the whole group for a representation
/// given on generators; returns every `ρ(g)` when `ρ(1) = I` is reproduced.
pub fn extend_from_generators(group: &FiniteGroup, gens: &[CMatrix]) -> Vec<CMatrix> {
    let words = WordTree::new(group);
    let n = group.order();
    let d = gens.first().map_or(1, CMatrix::rows);
    let mut mats: Vec<Option<CMatrix>> = vec![None; n];
    mats[0] = Some(CMatrix::identity(d));
    let mut order: Vec<usize> = (1..n).collect();
    // parents are discovered before children in BFS, so sort by depth
    let mut depth = vec![0usize; n];
    for (g, dg) in depth.iter_mut().enumerate().skip(1) {
        let mut x = g;
        while x != 0 {
            x = words.parent[x].0 as usize;
            *dg += 1;
        }
    }
    order.sort_by_key(|&g| depth[g]);
    for g in order {
        let (p, s) = words.parent[g];
        let m = mats[p as usize].as_ref().expect("parent first").mul_plain(&gens[s as usize]);
        mats[g] = Some(m);
    }
    mats.into_iter().map(|m| m.expect("every element reached")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::construct_named;
    use crate::linalg::ONE;

    fn z(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn z4_characters_are_ordered_trivial_first() {
        let g = Arc::new(construct_named(&"cyclic:4".parse().unwrap()).unwrap());
        let i = z(0.0, 1.0);
        let reps = (0..4)
            .rev()
            .map(|k| {
                let w = i.powu(k);
                RepData::Table((0..4).map(|x| CMatrix::scalar(w.powu(x as u32))).collect())
            })
            .collect();
        let set = IrrepSet::new(g.clone(), reps).unwrap();
        assert_eq!(set.len(), 4);
        assert_eq!(set.irreps()[0].chi(&g, 1), ONE);
        assert_eq!(set.irreps()[1].chi(&g, 1), z(0.0, 1.0));
        assert!((set.irreps()[3].chi(&g, 1) - z(-1.0, 0.0)).norm() < 1e-12);
        set.check_complete().unwrap();
    }

    #[test]
    fn generator_data_is_evaluated_lazily() {
        let g = Arc::new(construct_named(&"cyclic:6".parse().unwrap()).unwrap());
        let w = C64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let gens: Vec<CMatrix> = g.generators().iter().map(|&s| CMatrix::scalar(w.powu(s as u32))).collect();
        let all = extend_from_generators(&g, &gens);
        for (x, m) in all.iter().enumerate() {
            assert!((m[(0, 0)] - w.powu(x as u32)).norm() < 1e-12);
        }
        let set = IrrepSet::new(g.clone(), vec![RepData::Generators(gens)]).unwrap();
        assert!(set.irreps()[0].is_materialized());
        assert!(set.check_complete().is_err());
    }
}
