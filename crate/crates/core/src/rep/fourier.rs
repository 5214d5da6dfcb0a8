use rand::Rng;

use super::IrrepSet;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{CMatrix, OpCounter, C64, ZERO};

/// An element `c = Σ c_g g` of the group algebra, dense in element order.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraElement(Vec<C64>);

impl GroupAlgebraElement {
    pub fn new(coeffs: Vec<C64>) -> GroupAlgebraElement {
        GroupAlgebraElement(coeffs)
    }

    pub fn zeros(n: usize) -> GroupAlgebraElement {
        GroupAlgebraElement(vec![ZERO; n])
    }

    pub fn delta(n: usize, g: usize) -> GroupAlgebraElement {
        let mut c = vec![ZERO; n];
        c[g] = C64::new(1.0, 0.0);
        GroupAlgebraElement(c)
    }

    /// Entries with real and imaginary parts uniform in `[-1, 1)`.
    pub fn random(n: usize, rng: &mut impl Rng) -> GroupAlgebraElement {
        GroupAlgebraElement(
            (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.0
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.0
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.0
    }

    /// `α self + β other`
    pub fn combine(&self, alpha: C64, other: &GroupAlgebraElement, beta: C64) -> GroupAlgebraElement {
        GroupAlgebraElement(self.0.iter().zip(&other.0).map(|(a, b)| alpha * a + beta * b).collect())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_diff(&self, other: &GroupAlgebraElement) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// One `dim × dim` block per irrep, in the canonical order of the set.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBlockVector {
    blocks: Vec<CMatrix>,
}

impl FourierBlockVector {
    pub fn zeros(dims: &[usize]) -> FourierBlockVector {
        FourierBlockVector { blocks: dims.iter().map(|&d| CMatrix::zeros(d, d)).collect() }
    }

    pub fn from_blocks(dims: &[usize], blocks: Vec<CMatrix>) -> Result<FourierBlockVector> {
        if blocks.len() != dims.len() || blocks.iter().zip(dims).any(|(b, &d)| b.rows() != d || b.cols() != d) {
            return Err(Error::ShapeMismatch("blocks do not match the irrep layout".into()));
        }
        Ok(FourierBlockVector { blocks })
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [CMatrix] {
        &mut self.blocks
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(CMatrix::rows).collect()
    }

    /// Total number of scalars, `Σ dim²`.
    pub fn scalar_count(&self) -> usize {
        self.blocks.iter().map(|b| b.rows() * b.cols()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(CMatrix::max_abs).fold(0.0, f64::max)
    }

    /// `max |self - reference| / max(1, max |reference|)`
    pub fn max_rel_err(&self, reference: &FourierBlockVector) -> f64 {
        let diff = self
            .blocks
            .iter()
            .zip(&reference.blocks)
            .map(|(a, b)| a.max_diff(b))
            .fold(0.0, f64::max);
        diff / reference.max_abs().max(1.0)
    }

    /// Blockwise sum, counted.
    pub fn add_assign_counted(&mut self, other: &FourierBlockVector, counter: &mut OpCounter) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            crate::linalg::accumulate(a, b, counter);
        }
    }

    pub fn scale(&self, z: C64) -> FourierBlockVector {
        FourierBlockVector { blocks: self.blocks.iter().map(|b| b.scale(z)).collect() }
    }
}

/// `Σ_g c_g ⊕_ρ ρ(g)` straight from the definition: one scalar multiply per
/// matrix entry per element, summed in element order.
pub fn naive_dft(c: &GroupAlgebraElement, irreps: &IrrepSet, counter: &mut OpCounter) -> Result<FourierBlockVector> {
    irreps.check_complete()?;
    let n = irreps.group().order();
    if c.len() != n {
        return Err(Error::ShapeMismatch(format!("coefficient vector of length {} for order {n}", c.len())));
    }
    let dims = irreps.dims();
    let mut out = FourierBlockVector::zeros(&dims);
    let total = irreps.sum_of_squares() as u64;
    for (g, &cg) in c.coeffs().iter().enumerate() {
        for (ir, block) in irreps.irreps().iter().zip(out.blocks.iter_mut()) {
            block.axpy(cg, ir.matrix(g));
        }
        counter.add_mults(total);
        if g > 0 {
            counter.add_adds(total);
        }
    }
    Ok(out)
}

/// `c_g = (1/|G|) Σ_ρ dim(ρ) tr(F_ρ ρ(g⁻¹))`, valid for unitary irreps.
pub fn inverse_dft(f: &FourierBlockVector, irreps: &IrrepSet) -> Result<GroupAlgebraElement> {
    irreps.check_complete()?;
    let group = irreps.group();
    let n = group.order();
    if f.dims() != irreps.dims() {
        return Err(Error::ShapeMismatch("Fourier blocks do not match the irrep layout".into()));
    }
    let coeffs = (0..n)
        .map(|g| {
            let gi = group.inv(g);
            let s: C64 = irreps
                .irreps()
                .iter()
                .zip(f.blocks())
                .map(|(ir, fb)| {
                    let m = ir.matrix(gi);
                    let d = ir.dim();
                    let mut tr = ZERO;
                    for i in 0..d {
                        for j in 0..d {
                            tr += fb[(i, j)] * m[(j, i)];
                        }
                    }
                    tr * d as f64
                })
                .sum();
            s / n as f64
        })
        .collect();
    Ok(GroupAlgebraElement(coeffs))
}

/// `(c * d)_g = Σ_h c_h d_{h⁻¹ g}`
pub fn convolve(c: &GroupAlgebraElement, d: &GroupAlgebraElement, group: &FiniteGroup) -> GroupAlgebraElement {
    let n = group.order();
    let mut out = vec![ZERO; n];
    for (h, &ch) in c.coeffs().iter().enumerate() {
        if ch == ZERO {
            continue;
        }
        for (k, &dk) in d.coeffs().iter().enumerate() {
            // h * k = g  <=>  k = h⁻¹ g
            out[group.mul(h, k)] += ch * dk;
        }
    }
    GroupAlgebraElement(out)
}
