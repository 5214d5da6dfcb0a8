//! Complete irrep sets for small groups: closed-form characters for abelian
//! groups, numerical decomposition of the regular representation otherwise.

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{hermitian_eigen, unitarize, CMatrix, C64, ZERO};
use crate::rep::{
    export_irreps, extend_from_generators, import_irreps, verify_irrep_set, IrrepSet, RepData,
};

/// Retries with fresh seeds before a decomposition is declared failed.
const RETRIES: u64 = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct FactoryConfig {
    pub seed: u64,
    /// Largest order handled by regular-representation decomposition.
    pub order_cap: usize,
    pub cluster_tol: f64,
    pub verify: bool,
    pub cache_dir: Option<PathBuf>,
}

impl Default for FactoryConfig {
    fn default() -> Self {
        FactoryConfig { seed: 0x5eed, order_cap: 2048, cluster_tol: 1e-6, verify: true, cache_dir: None }
    }
}

/// One-dimensional characters built up along the chain
/// `⟨s_1⟩ ⊆ ⟨s_1, s_2⟩ ⊆ ...` of the group's generators. Values are tracked as
/// angles in turns so they stay exact roots of unity until the last step.
pub fn abelian_irreps(group: &Arc<FiniteGroup>) -> Result<IrrepSet> {
    if !group.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let n = group.order();
    let mut members = vec![0usize];
    let mut inside = vec![false; n];
    inside[0] = true;
    // one angle table per character, NaN outside the current subgroup
    let mut chars: Vec<Vec<f64>> = vec![{
        let mut a = vec![f64::NAN; n];
        a[0] = 0.0;
        a
    }];
    for &s in group.generators() {
        if inside[s] {
            continue;
        }
        // smallest m with s^m back in the subgroup
        let mut powers = vec![0usize, s];
        while !inside[*powers.last().expect("nonempty")] {
            let next = group.mul(*powers.last().expect("nonempty"), s);
            powers.push(next);
        }
        let m = powers.len() - 1;
        let sm = powers[m];
        let mut next_members = Vec::with_capacity(members.len() * m);
        for &p in &powers[..m] {
            for &x in &members {
                next_members.push((x, p, group.mul(x, p)));
            }
        }
        let mut next_chars = Vec::with_capacity(chars.len() * m);
        for chi in &chars {
            let theta = chi[sm];
            for k in 0..m {
                let zeta = (theta + k as f64) / m as f64;
                let mut a = vec![f64::NAN; n];
                for (e, &p) in powers[..m].iter().enumerate() {
                    for &x in &members {
                        a[group.mul(x, p)] = (chi[x] + e as f64 * zeta).rem_euclid(1.0);
                    }
                }
                next_chars.push(a);
            }
        }
        for &(_, _, y) in &next_members {
            inside[y] = true;
        }
        members = next_members.into_iter().map(|t| t.2).collect();
        chars = next_chars;
    }
    debug_assert_eq!(members.len(), n);
    let reps = chars
        .into_iter()
        .map(|a| {
            RepData::Table(
                a.into_iter()
                    .map(|t| CMatrix::scalar(C64::from_polar(1.0, std::f64::consts::TAU * t)))
                    .collect(),
            )
        })
        .collect();
    IrrepSet::new(group.clone(), reps)
}

/// `(R(s) V)[y, :] = V[y s, :]`, the right regular action on a column basis.
fn restrict_regular(group: &FiniteGroup, basis: &CMatrix, s: usize) -> CMatrix {
    let d = basis.cols();
    let n = group.order();
    let mut out = CMatrix::zeros(d, d);
    for y in 0..n {
        let ys = group.mul(y, s);
        for i in 0..d {
            let vi = basis[(y, i)].conj();
            if vi == ZERO {
                continue;
            }
            for j in 0..d {
                out[(i, j)] += vi * basis[(ys, j)];
            }
        }
    }
    out
}

/// `<χ_a, χ_b>` over the whole group.
fn char_inner(a: &[CMatrix], b: &[CMatrix]) -> C64 {
    let s: C64 = a.iter().zip(b).map(|(x, y)| x.trace() * y.trace().conj()).sum();
    s / a.len() as f64
}

/// Groups sorted eigenvalues into runs separated by gaps above `tol`.
fn clusters(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let x = CMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    x.add(&x.adjoint())
}

/// Splits a unitary representation (full table) into irreducible pieces,
/// each returned as a full table.
fn split_irreducible(
    group: &FiniteGroup,
    table: Vec<CMatrix>,
    rng: &mut ChaCha8Rng,
    tol: f64,
    depth: usize,
) -> Result<Vec<Vec<CMatrix>>> {
    let n = group.order() as f64;
    let norm = table.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / n;
    if (norm - 1.0).abs() < 1e-6 {
        return Ok(vec![table]);
    }
    if depth > 8 {
        return Err(Error::DecompositionFailed("splitting did not converge".into()));
    }
    let d = table[0].rows();
    for _ in 0..RETRIES {
        let x = random_hermitian(d, rng);
        let mut y = CMatrix::zeros(d, d);
        for m in &table {
            y.add_assign(&m.mul_plain(&x).mul_plain(&m.adjoint()));
        }
        let y = y.scale(C64::new(1.0 / n, 0.0));
        let (vals, vecs) = hermitian_eigen(&y)?;
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let runs = clusters(&vals, tol * scale);
        if runs.len() < 2 {
            continue;
        }
        let mut pieces = Vec::new();
        for run in runs {
            let u = vecs.block(0, run.start, d, run.len());
            let gens: Vec<CMatrix> = group
                .generators()
                .iter()
                .map(|&s| unitarize(&u.adjoint().mul_plain(&table[s]).mul_plain(&u)))
                .collect::<Result<_>>()?;
            let sub = extend_from_generators(group, &gens);
            pieces.extend(split_irreducible(group, sub, rng, tol, depth + 1)?);
        }
        return Ok(pieces);
    }
    Err(Error::DecompositionFailed("commutant element was scalar on a reducible block".into()))
}

fn decompose_once(group: &Arc<FiniteGroup>, config: &FactoryConfig, seed: u64) -> Result<IrrepSet> {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Hermitian element a (a_{k⁻¹} = conj a_k) acting by left multiplication,
    // which commutes with the right regular action
    let raw: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let a: Vec<C64> = (0..n).map(|k| (raw[k] + raw[group.inv(k)].conj()) * 0.5).collect();
    let l = CMatrix::from_fn(n, n, |y, x| a[group.mul(y, group.inv(x))]);
    let (vals, vecs) = hermitian_eigen(&l)?;
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = config.cluster_tol * scale;
    let runs = clusters(&vals, tol);
    let centers: Vec<f64> = runs.iter().map(|r| vals[r.clone()].iter().sum::<f64>() / r.len() as f64).collect();
    let mut claimed = vec![false; runs.len()];
    let mut found: Vec<Vec<CMatrix>> = Vec::new();
    let mut total = 0usize;
    for (ci, run) in runs.iter().enumerate() {
        if total == n {
            break;
        }
        if claimed[ci] {
            continue;
        }
        let v = vecs.block(0, run.start, n, run.len());
        let gens: Vec<CMatrix> = group
            .generators()
            .iter()
            .map(|&s| unitarize(&restrict_regular(group, &v, s)))
            .collect::<Result<_>>()?;
        let table = extend_from_generators(group, &gens);
        for piece in split_irreducible(group, table, &mut rng, config.cluster_tol.max(1e-9), 0)? {
            if found.iter().any(|f| char_inner(f, &piece).norm() > 0.5) {
                continue;
            }
            // every cluster carrying this type has its eigenvalue among eig(Σ a_k ρ(k⁻¹))
            let d = piece[0].rows();
            let mut nmat = CMatrix::zeros(d, d);
            for (k, &ak) in a.iter().enumerate() {
                nmat.axpy(ak, &piece[group.inv(k)]);
            }
            let (ev, _) = hermitian_eigen(&nmat)?;
            for (cj, &c) in centers.iter().enumerate() {
                if ev.iter().any(|&e| (e - c).abs() <= 10.0 * tol) && runs[cj].len() == d {
                    claimed[cj] = true;
                }
            }
            total += d * d;
            found.push(piece);
        }
    }
    if total != n {
        return Err(Error::DecompositionFailed(format!("found Σ dim² = {total} of {n}")));
    }
    let set = IrrepSet::new(group.clone(), found.into_iter().map(RepData::Table).collect())?;
    if config.verify {
        let report = verify_irrep_set(&set, 64, seed);
        if !report.passed() {
            return Err(Error::DecompositionFailed(format!("verification failed: {report}")));
        }
    }
    Ok(set)
}

/// Decomposes the regular representation into a complete irrep set.
pub fn regular_decompose(group: &Arc<FiniteGroup>, config: &FactoryConfig) -> Result<IrrepSet> {
    let n = group.order();
    if n > config.order_cap {
        return Err(Error::CapExceeded { order: n, cap: config.order_cap });
    }
    faer::set_global_parallelism(faer::Par::Seq);
    let mut last = None;
    for attempt in 0..=RETRIES {
        let seed = config.seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        match decompose_once(group, config, seed) {
            Ok(set) => return Ok(set),
            Err(e @ Error::DecompositionFailed(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Cache file for a group, when the group has a stable name.
pub fn cache_path(group: &FiniteGroup, config: &FactoryConfig) -> Option<PathBuf> {
    let key = group.descriptor().cache_key()?;
    Some(config.cache_dir.as_ref()?.join(format!("{key}__seed{}.irreps", config.seed)))
}

/// Abelian groups get closed-form characters; other groups are read from
/// the cache or decomposed and then cached.
pub fn irreps_for(group: &Arc<FiniteGroup>, config: &FactoryConfig) -> Result<IrrepSet> {
    if group.is_abelian() {
        return abelian_irreps(group);
    }
    let path = cache_path(group, config);
    if let Some(p) = path.as_ref().filter(|p| p.exists()) {
        return import_irreps(p, group);
    }
    let set = regular_decompose(group, config)?;
    if let Some(p) = path {
        export_irreps(&set, &p)?;
    }
    Ok(set)
}
