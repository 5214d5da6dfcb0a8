use std::fmt::Write as _;
use std::sync::Arc;

use crate::adapted::{apply_lift, build_lift, LiftOperatorData, RestrictionData};
use crate::error::{Error, Result};
use crate::group::{
    covering_translates, product_set, right_coset_reps, CoveringData, FactorizationTable, FiniteGroup, Subgroup,
};
use crate::linalg::{accumulate, invert, matmul, CMatrix, MatMulBackend, OpCounter, C64, ZERO};
use crate::rep::{naive_dft, FourierBlockVector, GroupAlgebraElement, IrrepSet};

/// Support mass tolerated outside `HKx`.
const SUPPORT_TOL: f64 = 1e-12;

/// Driver that produced a plan node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Naive,
    Abelian,
    Single,
    Double,
    Ldu,
    Solvable,
    General,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Naive => "naive",
            Strategy::Abelian => "abelian",
            Strategy::Single => "single",
            Strategy::Double => "double",
            Strategy::Ldu => "ldu",
            Strategy::Solvable => "solvable",
            Strategy::General => "general",
        }
    }
}

/// Reduction to `[G:H]` transforms over `H`.
#[derive(Debug, Clone)]
pub struct SingleStep {
    pub restriction: RestrictionData,
    pub coset_reps: Vec<usize>,
    pub child: DftPlan,
    /// Per irrep, per copy block: rows of `A⁻¹ ρ(g_i)` for that block,
    /// stacked over the coset representatives.
    stacked: Vec<Vec<CMatrix>>,
}

/// Reduction to `H`- and `K`-transforms over translates of `HK`.
#[derive(Debug, Clone)]
pub struct DoubleStep {
    pub h_res: RestrictionData,
    pub k_res: RestrictionData,
    pub table: FactorizationTable,
    pub covering: CoveringData,
    pub lift: LiftOperatorData,
    pub child_h: DftPlan,
    pub child_k: DftPlan,
}

#[derive(Debug, Clone)]
pub enum PlanNode {
    Naive,
    /// One-dimensional characters summed directly.
    Abelian,
    Single(Box<SingleStep>),
    Double(Box<DoubleStep>),
}

/// A recursion tree of reductions with all precomputed data.
#[derive(Debug, Clone)]
pub struct DftPlan {
    irreps: Arc<IrrepSet>,
    node: PlanNode,
    strategy: Strategy,
}

/// Output of a driver run.
#[derive(Debug, Clone)]
pub struct EngineResult {
    pub fourier: FourierBlockVector,
    pub counter: OpCounter,
    pub plan_trace: String,
}

fn check_child(child: &DftPlan, sub: &Subgroup) -> Result<()> {
    if !Arc::ptr_eq(child.group(), sub.as_group()) {
        return Err(Error::PreconditionViolated("child plan is not over the subgroup".into()));
    }
    Ok(())
}

impl DftPlan {
    pub fn naive(irreps: Arc<IrrepSet>) -> DftPlan {
        DftPlan { irreps, node: PlanNode::Naive, strategy: Strategy::Naive }
    }

    pub fn abelian(irreps: Arc<IrrepSet>) -> Result<DftPlan> {
        if !irreps.group().is_abelian() || irreps.max_dim() != 1 {
            return Err(Error::NotAbelian);
        }
        Ok(DftPlan { irreps, node: PlanNode::Abelian, strategy: Strategy::Abelian })
    }

    /// Abelian leaf when possible, naive otherwise.
    pub fn leaf(irreps: Arc<IrrepSet>) -> DftPlan {
        DftPlan::abelian(irreps.clone()).unwrap_or_else(|_| DftPlan::naive(irreps))
    }

    pub fn single(irreps: Arc<IrrepSet>, h: Subgroup, child: DftPlan) -> Result<DftPlan> {
        check_child(&child, &h)?;
        let group = irreps.group().clone();
        let coset_reps = right_coset_reps(&group, &h);
        let restriction = RestrictionData::new(irreps.clone(), h, child.irreps.clone())?;
        let mut stacked = Vec::with_capacity(irreps.len());
        for (rho, ad) in irreps.irreps().iter().zip(&restriction.per_irrep) {
            let ainv = invert(&ad.basis)?;
            let moved: Vec<CMatrix> = coset_reps.iter().map(|&g| ainv.mul_plain(rho.matrix(g))).collect();
            let d = rho.dim();
            let per_block = ad
                .layout
                .iter()
                .map(|b| {
                    let mut m = CMatrix::zeros(b.dim * moved.len(), d);
                    for (i, mv) in moved.iter().enumerate() {
                        m.set_block(i * b.dim, 0, &mv.block(b.offset, 0, b.dim, d));
                    }
                    m
                })
                .collect();
            stacked.push(per_block);
        }
        Ok(DftPlan {
            irreps,
            node: PlanNode::Single(Box::new(SingleStep { restriction, coset_reps, child, stacked })),
            strategy: Strategy::Single,
        })
    }

    pub fn double(irreps: Arc<IrrepSet>, h: Subgroup, k: Subgroup, child_h: DftPlan, child_k: DftPlan) -> Result<DftPlan> {
        check_child(&child_h, &h)?;
        check_child(&child_k, &k)?;
        let group = irreps.group().clone();
        let table = product_set(&h, &k);
        let covering = covering_translates(&group, &table);
        let h_res = RestrictionData::new(irreps.clone(), h, child_h.irreps.clone())?;
        let k_res = RestrictionData::new(irreps.clone(), k, child_k.irreps.clone())?;
        let lift = build_lift(&h_res, &k_res)?;
        Ok(DftPlan {
            irreps,
            node: PlanNode::Double(Box::new(DoubleStep { h_res, k_res, table, covering, lift, child_h, child_k })),
            strategy: Strategy::Double,
        })
    }

    /// Relabels the driver responsible for this node.
    pub fn with_strategy(mut self, strategy: Strategy) -> DftPlan {
        self.strategy = strategy;
        self
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.irreps.group()
    }

    pub fn irreps(&self) -> &Arc<IrrepSet> {
        &self.irreps
    }

    pub fn node(&self) -> &PlanNode {
        &self.node
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Runs the plan; counts go to `counter`.
    pub fn execute(&self, c: &GroupAlgebraElement, backend: MatMulBackend, counter: &mut OpCounter) -> Result<FourierBlockVector> {
        let n = self.group().order();
        if c.len() != n {
            return Err(Error::ShapeMismatch(format!("coefficient vector of length {} for order {n}", c.len())));
        }
        match &self.node {
            PlanNode::Naive | PlanNode::Abelian => naive_dft(c, &self.irreps, counter),
            PlanNode::Single(step) => single_subgroup_dft(&self.irreps, step, c, backend, counter),
            PlanNode::Double(step) => double_subgroup_dft(&self.irreps, step, c, backend, counter),
        }
    }

    /// Runs the plan with a fresh counter and records the trace.
    pub fn run(&self, c: &GroupAlgebraElement, backend: MatMulBackend) -> Result<EngineResult> {
        let mut counter = OpCounter::new();
        let fourier = self.execute(c, backend, &mut counter)?;
        Ok(EngineResult { fourier, counter, plan_trace: self.trace() })
    }

    /// Visits every node depth-first, parents first.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a DftPlan, usize)) {
        self.visit_at(0, f);
    }

    fn visit_at<'a>(&'a self, depth: usize, f: &mut impl FnMut(&'a DftPlan, usize)) {
        f(self, depth);
        match &self.node {
            PlanNode::Single(s) => s.child.visit_at(depth + 1, f),
            PlanNode::Double(d) => {
                d.child_h.visit_at(depth + 1, f);
                d.child_k.visit_at(depth + 1, f);
            }
            PlanNode::Naive | PlanNode::Abelian => {}
        }
    }

    /// Indented recursion tree with subgroup orders and covering sizes.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        self.visit(&mut |p, depth| {
            let n = p.group().order();
            let pad = "  ".repeat(depth);
            let _ = match &p.node {
                PlanNode::Naive => writeln!(out, "{pad}naive |G|={n}"),
                PlanNode::Abelian => writeln!(out, "{pad}abelian |G|={n}"),
                PlanNode::Single(s) => writeln!(
                    out,
                    "{pad}{} single |G|={n} |H|={} cosets={}",
                    p.strategy.name(),
                    s.restriction.subgroup.order(),
                    s.coset_reps.len()
                ),
                PlanNode::Double(d) => writeln!(
                    out,
                    "{pad}{} double |G|={n} |H|={} |K|={} |HK|={} r={}",
                    p.strategy.name(),
                    d.h_res.subgroup.order(),
                    d.k_res.subgroup.order(),
                    d.table.len(),
                    d.covering.r()
                ),
            };
        });
        out
    }
}

/// Coset decomposition `c = Σ_i c^(i) g_i`, one `H`-transform per coset,
/// and accumulation in the `H`-adapted basis.
pub fn single_subgroup_dft(
    irreps: &IrrepSet,
    step: &SingleStep,
    c: &GroupAlgebraElement,
    backend: MatMulBackend,
    counter: &mut OpCounter,
) -> Result<FourierBlockVector> {
    let group = irreps.group();
    let h = &step.restriction.subgroup;
    let pieces: Vec<FourierBlockVector> = step
        .coset_reps
        .iter()
        .map(|&gi| {
            let ci = GroupAlgebraElement::new(h.members().iter().map(|&m| c.coeffs()[group.mul(m, gi)]).collect());
            step.child.execute(&ci, backend, counter)
        })
        .collect::<Result<_>>()?;
    let t = step.coset_reps.len();
    let mut blocks = Vec::with_capacity(irreps.len());
    for ((rho, ad), stacked) in irreps.irreps().iter().zip(&step.restriction.per_irrep).zip(&step.stacked) {
        let d = rho.dim();
        let mut x = CMatrix::zeros(d, d);
        for (b, rows) in ad.layout.iter().zip(stacked) {
            let mut concat = CMatrix::zeros(b.dim, b.dim * t);
            for (i, p) in pieces.iter().enumerate() {
                concat.set_block(0, i * b.dim, p.block(b.sigma));
            }
            x.set_block(b.offset, 0, &matmul(&concat, rows, backend, counter)?);
        }
        blocks.push(matmul(&ad.basis, &x, backend, counter)?);
    }
    FourierBlockVector::from_blocks(&irreps.dims(), blocks)
}

/// `|H|` transforms over `K`, then `Σ dim(τ)²` transforms over `H`, giving
/// `Σ c_{hk} σ(h) ⊗ τ(k)` for every pair, indexed `[σ][τ]`.
pub fn tensor_dft(
    h_plan: &DftPlan,
    k_plan: &DftPlan,
    c_hk: &[Vec<C64>],
    backend: MatMulBackend,
    counter: &mut OpCounter,
) -> Result<Vec<Vec<CMatrix>>> {
    let (nh, nk) = (h_plan.group().order(), k_plan.group().order());
    if c_hk.len() != nh || c_hk.iter().any(|r| r.len() != nk) {
        return Err(Error::ShapeMismatch(format!("coefficients must be {nh}x{nk}")));
    }
    let stage1: Vec<FourierBlockVector> = c_hk
        .iter()
        .map(|row| k_plan.execute(&GroupAlgebraElement::new(row.clone()), backend, counter))
        .collect::<Result<_>>()?;
    let h_dims = h_plan.irreps().dims();
    let k_dims = k_plan.irreps().dims();
    let mut out: Vec<Vec<CMatrix>> = h_dims
        .iter()
        .map(|&e| k_dims.iter().map(|&f| CMatrix::zeros(e * f, e * f)).collect())
        .collect();
    for (ti, &f) in k_dims.iter().enumerate() {
        for u in 0..f {
            for v in 0..f {
                let slice = GroupAlgebraElement::new(stage1.iter().map(|s| s.block(ti)[(u, v)]).collect());
                let s = h_plan.execute(&slice, backend, counter)?;
                for (si, &e) in h_dims.iter().enumerate() {
                    let b = s.block(si);
                    let dst = &mut out[si][ti];
                    for x in 0..e {
                        for y in 0..e {
                            dst[(x * f + u, y * f + v)] = b[(x, y)];
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Transform of `c` supported on `HKx`: shift to `HK`, tensor step, lift,
/// and a final right multiplication by `ρ(x)`.
pub fn translated_hk_dft(
    irreps: &IrrepSet,
    step: &DoubleStep,
    c: &GroupAlgebraElement,
    x: usize,
    backend: MatMulBackend,
    counter: &mut OpCounter,
) -> Result<FourierBlockVector> {
    let group = irreps.group();
    let xinv = group.inv(x);
    let (nh, nk) = (step.h_res.subgroup.order(), step.k_res.subgroup.order());
    let mut c_hk = vec![vec![ZERO; nk]; nh];
    let mut outside = 0.0f64;
    for (g, &cg) in c.coeffs().iter().enumerate() {
        if cg == ZERO {
            continue;
        }
        match step.table.factor(group.mul(g, xinv)) {
            Some((h, k)) => c_hk[h][k] = cg,
            None => outside += cg.norm_sqr(),
        }
    }
    if outside.sqrt() > SUPPORT_TOL {
        return Err(Error::SupportViolation { mass: outside.sqrt() });
    }
    translated_from_pairs(irreps, step, &c_hk, x, backend, counter)
}

fn translated_from_pairs(
    irreps: &IrrepSet,
    step: &DoubleStep,
    c_hk: &[Vec<C64>],
    x: usize,
    backend: MatMulBackend,
    counter: &mut OpCounter,
) -> Result<FourierBlockVector> {
    let tensor = tensor_dft(&step.child_h, &step.child_k, c_hk, backend, counter)?;
    let lifted = apply_lift(&step.lift, &tensor, backend, counter)?;
    if x == 0 {
        return Ok(lifted);
    }
    let blocks = lifted
        .blocks()
        .iter()
        .zip(irreps.irreps())
        .map(|(b, rho)| matmul(b, rho.matrix(x), backend, counter))
        .collect::<Result<Vec<_>>>()?;
    FourierBlockVector::from_blocks(&irreps.dims(), blocks)
}

/// Splits `c` along the covering partition and sums the translated pieces.
pub fn double_subgroup_dft(
    irreps: &IrrepSet,
    step: &DoubleStep,
    c: &GroupAlgebraElement,
    backend: MatMulBackend,
    counter: &mut OpCounter,
) -> Result<FourierBlockVector> {
    let group = irreps.group();
    let (nh, nk) = (step.h_res.subgroup.order(), step.k_res.subgroup.order());
    let r = step.covering.r();
    let mut pieces = vec![vec![vec![ZERO; nk]; nh]; r];
    for (g, &cg) in c.coeffs().iter().enumerate() {
        let i = step.covering.assignment(g);
        let x = step.covering.translates()[i];
        let (h, k) = step.table.factor(group.mul(g, group.inv(x))).expect("covering assigns inside HKx");
        pieces[i][h][k] = cg;
    }
    let mut total: Option<FourierBlockVector> = None;
    for (piece, &x) in pieces.iter().zip(step.covering.translates()) {
        let f = translated_from_pairs(irreps, step, piece, x, backend, counter)?;
        match total.as_mut() {
            None => total = Some(f),
            Some(acc) => {
                for (a, b) in acc.blocks_mut().iter_mut().zip(f.blocks()) {
                    accumulate(a, b, counter);
                }
            }
        }
    }
    Ok(total.expect("covering is nonempty"))
}

/// `Σ_g c_g ⊕ ρ(g)` for `c` on `HK` given by its canonical pairs; exposed
/// for tests of the lift.
pub fn lift_pairs(
    irreps: &IrrepSet,
    step: &DoubleStep,
    c_hk: &[Vec<C64>],
    backend: MatMulBackend,
    counter: &mut OpCounter,
) -> Result<FourierBlockVector> {
    translated_from_pairs(irreps, step, c_hk, 0, backend, counter)
}
