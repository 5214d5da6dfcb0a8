use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::plan::{DftPlan, EngineResult, Strategy};
use crate::error::{Error, Result};
use crate::factory::{irreps_for, FactoryConfig};
use crate::group::{
    borel_subgroup, construct_named, find_hk_pair, hall_subgroup, ldu_subgroups, prime_factors, product_set,
    Descriptor, FiniteGroup, SearchBudget, Subgroup,
};
use crate::linalg::MatMulBackend;
use crate::rep::{GroupAlgebraElement, IrrepSet};

/// Upper limit on the threshold exponent.
pub const BETA_MAX: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// `4 / (4 + ω)` for the backend, kept below `BETA_MAX`.
pub fn default_beta(backend: MatMulBackend) -> f64 {
    (4.0 / (4.0 + backend.omega())).min(BETA_MAX - 1e-9)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub backend: MatMulBackend,
    /// Groups up to this order become leaves.
    pub base_size: usize,
    /// Threshold exponent; `None` picks [`default_beta`].
    pub beta: Option<f64>,
    pub budget: SearchBudget,
    pub seed: u64,
    pub factory: FactoryConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            backend: MatMulBackend::Naive,
            base_size: 32,
            beta: None,
            budget: SearchBudget::default(),
            seed: 7,
            factory: FactoryConfig::default(),
        }
    }
}

impl EngineConfig {
    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or_else(|| default_beta(self.backend))
    }
}

/// Engines selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Naive,
    Single,
    Double,
    Ldu,
    Solvable,
    General,
}

impl EngineKind {
    pub const ALL: [EngineKind; 6] = [
        EngineKind::Naive,
        EngineKind::Single,
        EngineKind::Double,
        EngineKind::Ldu,
        EngineKind::Solvable,
        EngineKind::General,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EngineKind::Naive => "naive",
            EngineKind::Single => "single",
            EngineKind::Double => "double",
            EngineKind::Ldu => "ldu",
            EngineKind::Solvable => "solvable",
            EngineKind::General => "general",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EngineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown engine {s}")))
    }
}

/// Irreps of a subgroup's own group view.
pub fn subgroup_irreps(h: &Subgroup, cfg: &EngineConfig) -> Result<Arc<IrrepSet>> {
    Ok(Arc::new(irreps_for(h.as_group(), &cfg.factory)?))
}

fn leaf_for(h: &Subgroup, cfg: &EngineConfig) -> Result<DftPlan> {
    Ok(DftPlan::leaf(subgroup_irreps(h, cfg)?))
}

/// Builds the plan of the named engine.
pub fn plan_engine(kind: EngineKind, irreps: Arc<IrrepSet>, cfg: &EngineConfig) -> Result<DftPlan> {
    match kind {
        EngineKind::Naive => Ok(DftPlan::naive(irreps)),
        EngineKind::Single => plan_single(irreps, cfg),
        EngineKind::Double => plan_double(irreps, cfg),
        EngineKind::Ldu => plan_ldu(irreps, cfg),
        EngineKind::Solvable => plan_solvable(irreps, cfg),
        EngineKind::General => plan_general(irreps, cfg),
    }
}

/// One single-subgroup step over the largest subgroup found, leaf child.
pub fn plan_single(irreps: Arc<IrrepSet>, cfg: &EngineConfig) -> Result<DftPlan> {
    let group = irreps.group().clone();
    let pair = find_hk_pair(&group, 1.0, &cfg.budget, cfg.seed)?;
    let h = pair.largest;
    let child = leaf_for(&h, cfg)?;
    DftPlan::single(irreps, h, child)
}

/// One double-subgroup step over the best pair found, leaf children.
pub fn plan_double(irreps: Arc<IrrepSet>, cfg: &EngineConfig) -> Result<DftPlan> {
    let group = irreps.group().clone();
    let pair = find_hk_pair(&group, cfg.beta(), &cfg.budget, cfg.seed)?;
    let (ch, ck) = (leaf_for(&pair.h, cfg)?, leaf_for(&pair.k, cfg)?);
    DftPlan::double(irreps, pair.h, pair.k, ch, ck)
}

fn check_ldu(group: &Arc<FiniteGroup>, h1: &Subgroup, h2: &Subgroup, b: &Subgroup, h3: &Subgroup) -> Result<()> {
    if product_set(h1, h2).intersection_order() != 1 {
        return Err(Error::PreconditionViolated("H1 and H2 intersect nontrivially".into()));
    }
    let h1h2 = product_set(h1, h2);
    if h1h2.members() != b.members() {
        return Err(Error::PreconditionViolated("H1 H2 is not the lower-triangular subgroup".into()));
    }
    if product_set(b, h3).intersection_order() != 1 {
        return Err(Error::PreconditionViolated("H1 H2 and H3 intersect nontrivially".into()));
    }
    debug_assert_eq!(group.order() % b.order(), 0);
    Ok(())
}

/// Outer double reduction over `(H1 H2, H3)` whose `H1 H2` transforms are an
/// inner double reduction over `(H1, H2)`.
pub fn plan_ldu(irreps: Arc<IrrepSet>, cfg: &EngineConfig) -> Result<DftPlan> {
    let group = irreps.group().clone();
    let (h1, h2, h3) = ldu_subgroups(&group)?;
    let b = borel_subgroup(&group)?;
    check_ldu(&group, &h1, &h2, &b, &h3)?;
    let b_irreps = subgroup_irreps(&b, cfg)?;
    let (l1, l2) = (h1.relative_to(&b)?, h2.relative_to(&b)?);
    let inner = DftPlan::double(b_irreps, l1.clone(), l2.clone(), leaf_for(&l1, cfg)?, leaf_for(&l2, cfg)?)?
        .with_strategy(Strategy::Ldu);
    DftPlan::double(irreps, b, h3.clone(), inner, leaf_for(&h3, cfg)?).map(|p| p.with_strategy(Strategy::Ldu))
}

fn is_prime_power(n: usize) -> bool {
    prime_factors(n).len() <= 1
}

/// Coprime splits `(a, b)` with `a b = n`, most balanced first.
fn coprime_splits(n: usize) -> Vec<(usize, usize)> {
    let parts: Vec<usize> = prime_factors(n).iter().map(|&(p, e)| p.pow(e)).collect();
    let mut out = Vec::new();
    for mask in 1..(1usize << parts.len()) - 1 {
        let a: usize = parts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &q)| q).product();
        out.push((a, n / a));
    }
    out.sort_by_key(|&(a, b)| (a.max(b), a));
    out
}

fn solvable_rec(irreps: Arc<IrrepSet>, cfg: &EngineConfig, top: bool) -> Result<DftPlan> {
    let group = irreps.group().clone();
    let n = group.order();
    if is_prime_power(n) || (!top && n <= cfg.base_size) {
        return Ok(DftPlan::leaf(irreps));
    }
    for (a, b) in coprime_splits(n) {
        let (Ok(h), Ok(k)) = (
            hall_subgroup(&group, a, &cfg.budget, cfg.seed),
            hall_subgroup(&group, b, &cfg.budget, cfg.seed),
        ) else {
            continue;
        };
        let ch = solvable_rec(subgroup_irreps(&h, cfg)?, cfg, false)?;
        let ck = solvable_rec(subgroup_irreps(&k, cfg)?, cfg, false)?;
        return DftPlan::double(irreps, h, k, ch, ck).map(|p| p.with_strategy(Strategy::Solvable));
    }
    if top {
        Err(Error::SplitNotFound)
    } else {
        Ok(DftPlan::leaf(irreps))
    }
}

/// Double reductions over coprime Hall subgroups, recursively; prime-power
/// orders become leaves. Fails with `SplitNotFound` when the top-level group
/// has no coprime split.
pub fn plan_solvable(irreps: Arc<IrrepSet>, cfg: &EngineConfig) -> Result<DftPlan> {
    solvable_rec(irreps, cfg, true)
}

fn general_rec(irreps: Arc<IrrepSet>, cfg: &EngineConfig, top: bool) -> Result<DftPlan> {
    let group = irreps.group().clone();
    let n = group.order();
    if !top && n <= cfg.base_size {
        return Ok(DftPlan::leaf(irreps));
    }
    let pair = match find_hk_pair(&group, cfg.beta(), &cfg.budget, cfg.seed) {
        Ok(p) => p,
        Err(Error::NotFound) => return Ok(DftPlan::leaf(irreps).with_strategy(Strategy::General)),
        Err(e) => return Err(e),
    };
    if pair.within_beta {
        let ch = general_rec(subgroup_irreps(&pair.h, cfg)?, cfg, false)?;
        let ck = general_rec(subgroup_irreps(&pair.k, cfg)?, cfg, false)?;
        DftPlan::double(irreps, pair.h, pair.k, ch, ck).map(|p| p.with_strategy(Strategy::General))
    } else {
        let h = pair.largest;
        let child = general_rec(subgroup_irreps(&h, cfg)?, cfg, false)?;
        DftPlan::single(irreps, h, child).map(|p| p.with_strategy(Strategy::General))
    }
}

/// Threshold-switching recursion: a double reduction when both factors of
/// the best pair are at most `|G|^β`, otherwise a single reduction over the
/// largest subgroup found. The top level always reduces when it can.
pub fn plan_general(irreps: Arc<IrrepSet>, cfg: &EngineConfig) -> Result<DftPlan> {
    let beta = cfg.beta();
    if !(beta > 0.0 && beta < BETA_MAX) {
        return Err(Error::PreconditionViolated(format!("beta = {beta} outside (0, {BETA_MAX:.4})")));
    }
    general_rec(irreps, cfg, true)
}

/// Group, irreps and LDU plan for `SL(n,p)` or `GL(n,p)`.
pub fn prepare_linear(descriptor: &Descriptor, cfg: &EngineConfig) -> Result<DftPlan> {
    if !descriptor.is_matrix_group() {
        return Err(Error::WrongDescriptor(descriptor.to_string()));
    }
    let group = Arc::new(construct_named(descriptor)?);
    let irreps = Arc::new(irreps_for(&group, &cfg.factory)?);
    plan_ldu(irreps, cfg)
}

fn run_linear(descriptor: Descriptor, c: &GroupAlgebraElement, cfg: &EngineConfig) -> Result<EngineResult> {
    prepare_linear(&descriptor, cfg)?.run(c, cfg.backend)
}

pub fn sl2_dft(p: usize, c: &GroupAlgebraElement, cfg: &EngineConfig) -> Result<EngineResult> {
    run_linear(Descriptor::SpecialLinear { n: 2, p }, c, cfg)
}

pub fn sl_dft(n: usize, p: usize, c: &GroupAlgebraElement, cfg: &EngineConfig) -> Result<EngineResult> {
    run_linear(Descriptor::SpecialLinear { n, p }, c, cfg)
}

pub fn gl_dft(n: usize, p: usize, c: &GroupAlgebraElement, cfg: &EngineConfig) -> Result<EngineResult> {
    run_linear(Descriptor::GeneralLinear { n, p }, c, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_defaults() {
        assert!((default_beta(MatMulBackend::Naive) - 4.0 / 7.0).abs() < 1e-12);
        let s = default_beta(MatMulBackend::strassen(8).unwrap());
        assert!(s > 4.0 / 7.0 && s < BETA_MAX);
    }

    #[test]
    fn splits_are_coprime() {
        assert_eq!(coprime_splits(6), vec![(2, 3), (3, 2)]);
        assert!(coprime_splits(8).is_empty());
        let s = coprime_splits(60);
        assert!(s.contains(&(12, 5)));
        assert!(s.iter().all(|&(a, b)| a * b == 60));
    }

    #[test]
    fn engine_names_round_trip() {
        for k in EngineKind::ALL {
            assert_eq!(k.name().parse::<EngineKind>().unwrap(), k);
        }
    }
}
