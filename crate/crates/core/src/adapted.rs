//! Restriction of irreps to a subgroup: multiplicities, subgroup-adapted
//! bases, and the intertwiner data behind the lift from `H x K` tensor blocks
//! to the irreps of `G`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{
    invert, matmul, orthonormal_basis, BlockDiagMatrix, CMatrix, MatMulBackend, OpCounter, C64, ZERO,
};
use crate::rep::{FourierBlockVector, Irrep, IrrepSet};

/// Structural tolerance for block-diagonality checks.
pub const STRUCT_TOL: f64 = 1e-8;

/// One copy of a subgroup irrep inside the restriction of a `G`-irrep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopyBlock {
    /// Index of the subgroup irrep.
    pub sigma: usize,
    pub copy: usize,
    pub offset: usize,
    pub dim: usize,
}

/// Adapted basis of one `G`-irrep: `A⁻¹ ρ(h) A = ⊕ σ(h)` over `layout`.
#[derive(Debug, Clone)]
pub struct AdaptedIrrep {
    pub mult: Vec<usize>,
    pub basis: CMatrix,
    pub layout: Vec<CopyBlock>,
}

/// Restriction of every irrep of `G` to a subgroup `H`.
#[derive(Debug, Clone)]
pub struct RestrictionData {
    pub g_irreps: Arc<IrrepSet>,
    pub h_irreps: Arc<IrrepSet>,
    pub subgroup: Subgroup,
    pub per_irrep: Vec<AdaptedIrrep>,
}

/// `n_{σ,ρ} = (1/|H|) Σ_h χ_ρ(h) conj χ_σ(h)` for every `σ`, rounded.
pub fn multiplicities(rho: &Irrep, g_irreps: &IrrepSet, h: &Subgroup, h_irreps: &IrrepSet) -> Result<Vec<usize>> {
    let group = g_irreps.group();
    let hg = h_irreps.group();
    let chi_rho: Vec<C64> = h.members().iter().map(|&g| rho.chi(group, g)).collect();
    h_irreps
        .irreps()
        .iter()
        .map(|sigma| {
            let s: C64 = chi_rho
                .iter()
                .enumerate()
                .map(|(hl, &x)| x * sigma.chi(hg, hl).conj())
                .sum::<C64>()
                / h.order() as f64;
            let rounded = s.re.round();
            let residual = (s - C64::new(rounded, 0.0)).norm();
            if residual > 1e-6 || rounded < 0.0 {
                return Err(Error::NonIntegerMultiplicity { residual });
            }
            Ok(rounded as usize)
        })
        .collect()
}

/// `P_{i,0} = (dim σ / |H|) Σ_h conj(σ(h)[i, 0]) ρ(h)`
fn matrix_unit(rho: &Irrep, sigma: &Irrep, h: &Subgroup, i: usize) -> CMatrix {
    let d = rho.dim();
    let mut p = CMatrix::zeros(d, d);
    for (hl, &g) in h.members().iter().enumerate() {
        let w = sigma.matrix(hl)[(i, 0)].conj();
        if w != ZERO {
            p.axpy(w, rho.matrix(g));
        }
    }
    p.scale(C64::new(sigma.dim() as f64 / h.order() as f64, 0.0))
}

/// Builds the adapted basis of `rho`: an orthonormal basis `w_c` of the image
/// of `P_{0,0}` fixes one vector per copy, and `P_{i,0} w_c` supplies the rest,
/// so every copy carries `σ` in exactly the realization of `h_irreps`.
pub fn adapt(rho: &Irrep, g_irreps: &IrrepSet, h: &Subgroup, h_irreps: &IrrepSet) -> Result<AdaptedIrrep> {
    let mult = multiplicities(rho, g_irreps, h, h_irreps)?;
    let d = rho.dim();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    let mut layout = Vec::new();
    for (si, sigma) in h_irreps.irreps().iter().enumerate() {
        let n = mult[si];
        if n == 0 {
            continue;
        }
        let e = sigma.dim();
        let p00 = matrix_unit(rho, sigma, h, 0);
        let ws = orthonormal_basis(&p00, STRUCT_TOL);
        if ws.len() != n {
            return Err(Error::RankDeficiency { expected: n, found: ws.len() });
        }
        let units: Vec<CMatrix> = (0..e).map(|i| if i == 0 { p00.clone() } else { matrix_unit(rho, sigma, h, i) }).collect();
        for (c, w) in ws.iter().enumerate() {
            layout.push(CopyBlock { sigma: si, copy: c, offset: cols.len(), dim: e });
            for u in &units {
                cols.push(u.mul_vec(w));
            }
        }
    }
    if cols.len() != d {
        return Err(Error::RankDeficiency { expected: d, found: cols.len() });
    }
    Ok(AdaptedIrrep { mult, basis: CMatrix::from_columns(d, &cols), layout })
}

impl RestrictionData {
    pub fn new(g_irreps: Arc<IrrepSet>, subgroup: Subgroup, h_irreps: Arc<IrrepSet>) -> Result<RestrictionData> {
        if !Arc::ptr_eq(subgroup.as_group(), h_irreps.group()) {
            return Err(Error::PreconditionViolated("subgroup irreps belong to another group".into()));
        }
        let per_irrep = g_irreps
            .irreps()
            .iter()
            .map(|rho| adapt(rho, &g_irreps, &subgroup, &h_irreps))
            .collect::<Result<_>>()?;
        Ok(RestrictionData { g_irreps, h_irreps, subgroup, per_irrep })
    }

    /// Largest entry outside the copy blocks of `A⁻¹ ρ(h) A`, over all `h`
    /// and `ρ`, divided by `dim ρ`.
    pub fn max_off_block(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (rho, ad) in self.g_irreps.irreps().iter().zip(&self.per_irrep) {
            let ainv = invert(&ad.basis)?;
            let sizes: Vec<usize> = ad.layout.iter().map(|b| b.dim).collect();
            for &g in self.subgroup.members() {
                let conj = ainv.mul_plain(rho.matrix(g)).mul_plain(&ad.basis);
                worst = worst.max(BlockDiagMatrix::off_block_max(&conj, &sizes) / rho.dim() as f64);
            }
        }
        Ok(worst)
    }

    /// Largest deviation of a diagonal copy block from the subgroup irrep it
    /// should realize.
    pub fn max_copy_mismatch(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (rho, ad) in self.g_irreps.irreps().iter().zip(&self.per_irrep) {
            let ainv = invert(&ad.basis)?;
            for (hl, &g) in self.subgroup.members().iter().enumerate() {
                let conj = ainv.mul_plain(rho.matrix(g)).mul_plain(&ad.basis);
                for b in &ad.layout {
                    let want = self.h_irreps.irreps()[b.sigma].matrix(hl);
                    worst = worst.max(conj.block(b.offset, b.offset, b.dim, b.dim).max_diff(want));
                }
            }
        }
        Ok(worst)
    }
}

/// `Σ_ρ n_{σ,ρ} dim ρ` against `dim σ [G:H]`, per subgroup irrep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub rows: Vec<(usize, usize, usize)>,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|&(_, got, want)| got == want)
    }
}

pub fn frobenius_check(data: &RestrictionData) -> FrobeniusReport {
    let index = data.subgroup.index();
    let rows = data
        .h_irreps
        .irreps()
        .iter()
        .enumerate()
        .map(|(si, sigma)| {
            let got = data
                .g_irreps
                .irreps()
                .iter()
                .zip(&data.per_irrep)
                .map(|(rho, ad)| ad.mult[si] * rho.dim())
                .sum();
            (si, got, sigma.dim() * index)
        })
        .collect();
    FrobeniusReport { rows }
}

/// Where one sub-block `B_i` of `M_ρ` sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GatherSlot {
    pub rho: usize,
    pub row: usize,
    pub col: usize,
}

/// All sub-blocks `B_i` pairing a `σ`-copy with a `τ`-copy.
#[derive(Debug, Clone)]
pub struct Gather {
    pub slots: Vec<GatherSlot>,
    /// `dim σ dim τ × p(σ, τ)`, column `i` is `vec(B_i)`.
    pub b_cols: CMatrix,
}

/// Per-irrep intertwiners `S`, `T`, `M = S⁻¹ T` and the gathered sub-blocks.
#[derive(Debug, Clone)]
pub struct LiftOperatorData {
    pub s: Vec<CMatrix>,
    pub t_inv: Vec<CMatrix>,
    pub m: Vec<CMatrix>,
    /// Indexed `[σ][τ]`.
    pub gather: Vec<Vec<Gather>>,
    pub g_dims: Vec<usize>,
    pub h_dims: Vec<usize>,
    pub k_dims: Vec<usize>,
}

/// `S` from the `H`-adapted bases, `T` from the `K`-adapted ones.
pub fn build_lift(h_res: &RestrictionData, k_res: &RestrictionData) -> Result<LiftOperatorData> {
    if !Arc::ptr_eq(&h_res.g_irreps, &k_res.g_irreps) {
        return Err(Error::PreconditionViolated("restrictions of different irrep sets".into()));
    }
    let g_dims = h_res.g_irreps.dims();
    let h_dims = h_res.h_irreps.dims();
    let k_dims = k_res.h_irreps.dims();
    let mut s = Vec::with_capacity(g_dims.len());
    let mut t_inv = Vec::with_capacity(g_dims.len());
    let mut m = Vec::with_capacity(g_dims.len());
    let mut slots: Vec<Vec<Vec<GatherSlot>>> = vec![vec![Vec::new(); k_dims.len()]; h_dims.len()];
    for (rho, (ah, ak)) in h_res.per_irrep.iter().zip(&k_res.per_irrep).enumerate() {
        let s_inv = invert(&ah.basis)?;
        let mr = s_inv.mul_plain(&ak.basis);
        for bh in &ah.layout {
            for bk in &ak.layout {
                slots[bh.sigma][bk.sigma].push(GatherSlot { rho, row: bh.offset, col: bk.offset });
            }
        }
        s.push(ah.basis.clone());
        t_inv.push(invert(&ak.basis)?);
        m.push(mr);
    }
    let gather = slots
        .into_iter()
        .enumerate()
        .map(|(si, row)| {
            row.into_iter()
                .enumerate()
                .map(|(ti, slots)| {
                    let (e, f) = (h_dims[si], k_dims[ti]);
                    let cols: Vec<Vec<C64>> =
                        slots.iter().map(|sl| m[sl.rho].block(sl.row, sl.col, e, f).vec()).collect();
                    Gather { b_cols: CMatrix::from_columns(e * f, &cols), slots }
                })
                .collect()
        })
        .collect();
    Ok(LiftOperatorData { s, t_inv, m, gather, g_dims, h_dims, k_dims })
}

impl LiftOperatorData {
    /// Off-block mass of `M` assembled over all irreps, relative to the total
    /// dimension. Zero up to rounding since both `S` and `T` respect the
    /// irrep decomposition.
    pub fn m_off_block_mass(&self) -> Result<f64> {
        let total: usize = self.g_dims.iter().sum();
        let mut s_full = CMatrix::zeros(total, total);
        let mut t_full = CMatrix::zeros(total, total);
        let mut off = 0;
        for (rho, s) in self.s.iter().enumerate() {
            s_full.set_block(off, off, s);
            t_full.set_block(off, off, &invert(&self.t_inv[rho])?);
            off += s.rows();
        }
        let m_full = invert(&s_full)?.mul_plain(&t_full);
        let mut mass = 0.0f64;
        let mut owner = Vec::with_capacity(total);
        for (b, &d) in self.g_dims.iter().enumerate() {
            owner.extend(std::iter::repeat_n(b, d));
        }
        for i in 0..total {
            for j in 0..total {
                if owner[i] != owner[j] {
                    mass += m_full[(i, j)].norm_sqr();
                }
            }
        }
        Ok(mass.sqrt() / total as f64)
    }

    /// `p(σ, τ) = Σ_ρ n_{σ,ρ} m_{τ,ρ}`
    pub fn p(&self, sigma: usize, tau: usize) -> usize {
        self.gather[sigma][tau].slots.len()
    }
}

/// `Z[(x,u),(y,v)] = T[(x,v),(y,u)]`: turns `Σ c σ(h) ⊗ τ(k)` into
/// `Σ c σ(h) ⊗ τ(k)ᵀ`.
pub fn transpose_second_factor(t: &CMatrix, e: usize, f: usize) -> CMatrix {
    CMatrix::from_fn(e * f, e * f, |r, c| {
        let (x, u) = (r / f, r % f);
        let (y, v) = (c / f, c % f);
        t[(x * f + v, y * f + u)]
    })
}

/// Turns tensor blocks `Σ c_{hk} σ(h) ⊗ τ(k)` (indexed `[σ][τ]`) into
/// `⊕_ρ Σ c_{hk} ρ(hk)`.
pub fn apply_lift(
    lift: &LiftOperatorData,
    tensor: &[Vec<CMatrix>],
    backend: MatMulBackend,
    counter: &mut OpCounter,
) -> Result<FourierBlockVector> {
    if tensor.len() != lift.h_dims.len() || tensor.iter().any(|row| row.len() != lift.k_dims.len()) {
        return Err(Error::ShapeMismatch("tensor blocks do not match the subgroup irreps".into()));
    }
    let mut middle: Vec<CMatrix> = lift.g_dims.iter().map(|&d| CMatrix::zeros(d, d)).collect();
    for (si, row) in tensor.iter().enumerate() {
        for (ti, block) in row.iter().enumerate() {
            let (e, f) = (lift.h_dims[si], lift.k_dims[ti]);
            if block.rows() != e * f || block.cols() != e * f {
                return Err(Error::ShapeMismatch(format!(
                    "tensor block ({si},{ti}) is {}x{}, expected {}",
                    block.rows(),
                    block.cols(),
                    e * f
                )));
            }
            let g = &lift.gather[si][ti];
            if g.slots.is_empty() {
                continue;
            }
            let z = transpose_second_factor(block, e, f);
            let prod = matmul(&z, &g.b_cols, backend, counter)?;
            for (i, sl) in g.slots.iter().enumerate() {
                let p = &mut middle[sl.rho];
                for x in 0..e {
                    for y in 0..f {
                        p[(sl.row + x, sl.col + y)] = prod[(x * f + y, i)];
                    }
                }
            }
        }
    }
    let blocks = middle
        .iter()
        .enumerate()
        .map(|(rho, p)| {
            let sp = matmul(&lift.s[rho], p, backend, counter)?;
            matmul(&sp, &lift.t_inv[rho], backend, counter)
        })
        .collect::<Result<Vec<_>>>()?;
    FourierBlockVector::from_blocks(&lift.g_dims, blocks)
}
