use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use gdft::engine::{plan_engine, DftPlan, EngineConfig, EngineKind, PlanNode};
use gdft::factory::{cache_path, irreps_for, FactoryConfig};
use gdft::group::{load_group, FiniteGroup};
use gdft::linalg::{MatMulBackend, OpCounter};
use gdft::rep::{export_irreps, import_irreps, naive_dft, verify_irrep_set, GroupAlgebraElement, IrrepSet};
use gdft::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::fit::{fit_loglog, read_points, Fit};
use crate::spec::expand;

pub const CSV_HEADER: [&str; 9] = ["descriptor", "order", "engine", "backend", "r", "mults", "adds", "max_rel_err", "seconds"];
pub const ORACLE_CAP: usize = 2500;
pub const ORACLE_TOL: f64 = 1e-6;
pub const DELTA_TOL: f64 = 1e-9;
pub const DELTA_SPOT_CHECKS: usize = 200;
pub const DEFAULT_CACHE_DIR: &str = ".gdft-cache";

/// An engine name or `auto` (LDU for matrix groups, general otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Auto,
    Kind(EngineKind),
}

impl EngineChoice {
    pub fn resolve(self, group: &FiniteGroup) -> EngineKind {
        match self {
            EngineChoice::Kind(k) => k,
            EngineChoice::Auto if group.descriptor().is_matrix_group() => EngineKind::Ldu,
            EngineChoice::Auto => EngineKind::General,
        }
    }
}

impl FromStr for EngineChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "auto" {
            Ok(EngineChoice::Auto)
        } else {
            s.parse().map(EngineChoice::Kind)
        }
    }
}

impl fmt::Display for EngineChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineChoice::Auto => f.write_str("auto"),
            EngineChoice::Kind(k) => write!(f, "{k}"),
        }
    }
}

/// Options shared by the subcommands.
#[derive(Debug, Clone)]
pub struct Settings {
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub order_cap: usize,
    pub backend: MatMulBackend,
    pub beta: Option<f64>,
    pub base_size: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: 7,
            cache_dir: None,
            order_cap: ORACLE_CAP,
            backend: MatMulBackend::Naive,
            beta: None,
            base_size: 32,
        }
    }
}

impl Settings {
    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            backend: self.backend,
            base_size: self.base_size,
            beta: self.beta,
            seed: self.seed,
            factory: FactoryConfig { order_cap: self.order_cap, cache_dir: self.cache_dir.clone(), ..FactoryConfig::default() },
            ..EngineConfig::default()
        }
    }
}

/// Errors meaning "this engine does not apply to this group".
fn not_applicable(e: &Error) -> bool {
    matches!(e, Error::NotFound | Error::SplitNotFound | Error::WrongDescriptor(_))
}

fn random_input(n: usize, seed: u64) -> GroupAlgebraElement {
    GroupAlgebraElement::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn applicable_kinds(group: &FiniteGroup) -> impl Iterator<Item = EngineKind> + '_ {
    EngineKind::ALL
        .into_iter()
        .filter(|k| *k != EngineKind::Ldu || group.descriptor().is_matrix_group())
}

/// Worst error of one plan: random inputs against the naive oracle up to
/// `ORACLE_CAP`, delta inputs against `⊕ρ(g)` above it.
fn plan_error(plan: &DftPlan, irreps: &IrrepSet, settings: &Settings, samples: usize) -> Result<f64> {
    let n = irreps.group().order();
    let mut worst = 0.0f64;
    if n <= ORACLE_CAP {
        for s in 0..samples as u64 {
            let c = random_input(n, settings.seed.wrapping_add(s));
            let got = plan.run(&c, settings.backend)?;
            let want = naive_dft(&c, irreps, &mut OpCounter::new())?;
            worst = worst.max(got.fourier.max_rel_err(&want));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
        for _ in 0..DELTA_SPOT_CHECKS {
            let g = rng.gen_range(0..n);
            let got = plan.run(&GroupAlgebraElement::delta(n, g), settings.backend)?;
            for (ir, b) in irreps.irreps().iter().zip(got.fourier.blocks()) {
                worst = worst.max(b.max_diff(ir.matrix(g)));
            }
        }
    }
    Ok(worst)
}

/// Runs every applicable engine against the oracle. Returns the number of
/// failures; each group and engine gets one report line.
pub fn verify(spec: &str, settings: &Settings, samples: usize, out: &mut impl Write) -> Result<usize> {
    let cfg = settings.engine_config();
    let mut failures = 0;
    for desc in expand(spec)? {
        let loaded = load_group(&desc).and_then(|g| Ok((irreps_for(&g, &cfg.factory)?, g)));
        let irreps = match loaded {
            Ok((set, _)) => Arc::new(set),
            Err(e @ Error::CapExceeded { .. }) => {
                writeln!(out, "SKIP {desc}: {e}")?;
                continue;
            }
            Err(e) => {
                writeln!(out, "FAIL {desc}: {e}")?;
                failures += 1;
                continue;
            }
        };
        let tol = if irreps.group().order() <= ORACLE_CAP { ORACLE_TOL } else { DELTA_TOL };
        for kind in applicable_kinds(irreps.group()) {
            let outcome = plan_engine(kind, irreps.clone(), &cfg)
                .map_err(CliError::from)
                .and_then(|p| plan_error(&p, &irreps, settings, samples));
            match outcome {
                Ok(err) if err <= tol => writeln!(out, "PASS {desc} {kind} max_err {err:.3e}")?,
                Ok(err) => {
                    failures += 1;
                    writeln!(out, "FAIL {desc} {kind} max_err {err:.3e} tol {tol:e}")?
                }
                Err(CliError::Core(e)) if not_applicable(&e) => writeln!(out, "N/A  {desc} {kind}: {e}")?,
                Err(e) => {
                    failures += 1;
                    writeln!(out, "FAIL {desc} {kind}: {e}")?
                }
            }
        }
    }
    Ok(failures)
}

/// One benchmark row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub descriptor: String,
    pub order: usize,
    pub engine: String,
    pub backend: String,
    pub r: Option<usize>,
    /// `None` marks a skipped instance.
    pub counts: Option<(u64, u64)>,
    pub max_rel_err: Option<f64>,
    pub seconds: Option<f64>,
}

impl BenchRecord {
    pub fn fields(&self) -> [String; 9] {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let (mults, adds) = match self.counts {
            Some((m, a)) => (m.to_string(), a.to_string()),
            None => ("skipped".to_string(), "skipped".to_string()),
        };
        [
            self.descriptor.clone(),
            self.order.to_string(),
            self.engine.clone(),
            self.backend.clone(),
            opt(self.r.map(|r| r.to_string())),
            mults,
            adds,
            opt(self.max_rel_err.map(|e| format!("{e:.3e}"))),
            opt(self.seconds.map(|s| format!("{s:.6}"))),
        ]
    }
}

fn top_r(plan: &DftPlan) -> Option<usize> {
    match plan.node() {
        PlanNode::Double(d) => Some(d.covering.r()),
        _ => None,
    }
}

/// Benchmarks one engine over a family. Instances whose group or irreps
/// exceed a cap, or to which the engine does not apply, become skipped rows.
pub fn bench(family: &str, engine: EngineChoice, settings: &Settings, timing: bool) -> Result<Vec<BenchRecord>> {
    let cfg = settings.engine_config();
    let mut rows = Vec::new();
    for desc in expand(family)? {
        let group = load_group(&desc)?;
        let n = group.order();
        let kind = engine.resolve(&group);
        let mut row = BenchRecord {
            descriptor: desc.clone(),
            order: n,
            engine: kind.to_string(),
            backend: settings.backend.to_string(),
            r: None,
            counts: None,
            max_rel_err: None,
            seconds: None,
        };
        let planned = irreps_for(&group, &cfg.factory)
            .map(Arc::new)
            .and_then(|set| Ok((plan_engine(kind, set.clone(), &cfg)?, set)));
        let (plan, irreps) = match planned {
            Ok(p) => p,
            Err(e) if matches!(e, Error::CapExceeded { .. }) || not_applicable(&e) => {
                rows.push(row);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let c = random_input(n, settings.seed);
        let start = Instant::now();
        let res = plan.run(&c, settings.backend)?;
        let elapsed = start.elapsed().as_secs_f64();
        row.r = top_r(&plan);
        row.counts = Some((res.counter.mults(), res.counter.adds()));
        if n <= ORACLE_CAP {
            let want = naive_dft(&c, &irreps, &mut OpCounter::new())?;
            row.max_rel_err = Some(res.fourier.max_rel_err(&want));
        }
        row.seconds = timing.then_some(elapsed);
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn fit(path: &Path, engine: Option<&str>, max_slope: Option<f64>) -> Result<Fit> {
    let f = fit_loglog(&read_points(path, engine)?)?;
    match max_slope {
        Some(limit) if f.slope > limit => Err(CliError::SlopeAboveLimit { slope: f.slope, limit }),
        _ => Ok(f),
    }
}

/// Digest recorded on the last line of an irrep file.
pub fn file_digest(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path)?;
    Ok(text
        .lines()
        .rev()
        .find_map(|l| l.strip_prefix("SHA256 "))
        .unwrap_or_default()
        .to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrrepsOutcome {
    pub dims: Vec<usize>,
    pub path: PathBuf,
    pub cache_hit: bool,
    pub digest: String,
}

/// Generates, verifies and caches the irreps of a named group.
pub fn irreps(descriptor: &str, settings: &Settings) -> Result<IrrepsOutcome> {
    let mut settings = settings.clone();
    let dir = settings.cache_dir.get_or_insert_with(|| PathBuf::from(DEFAULT_CACHE_DIR)).clone();
    let factory = settings.engine_config().factory;
    let group = load_group(descriptor)?;
    let path = cache_path(&group, &factory)
        .ok_or_else(|| CliError::BadSpec(format!("{descriptor} has no stable cache name")))?;
    let cache_hit = path.exists();
    let set = if cache_hit { import_irreps(&path, &group)? } else { irreps_for(&group, &factory)? };
    let report = verify_irrep_set(&set, 64, settings.seed);
    if !report.passed() {
        return Err(CliError::InvalidIrreps(format!("{:?}", report.violations)));
    }
    if !path.exists() {
        std::fs::create_dir_all(&dir)?;
        export_irreps(&set, &path)?;
    }
    Ok(IrrepsOutcome { dims: set.dims(), digest: file_digest(&path)?, path, cache_hit })
}

/// Plan tree of an engine on a group.
pub fn plan(descriptor: &str, engine: EngineChoice, settings: &Settings) -> Result<String> {
    let cfg = settings.engine_config();
    let group = load_group(descriptor)?;
    let kind = engine.resolve(&group);
    let set = Arc::new(irreps_for(&group, &cfg.factory)?);
    let p = plan_engine(kind, set, &cfg)?;
    Ok(format!(
        "group {} order {} engine {kind} beta {:.4}\n{}",
        group.descriptor(),
        group.order(),
        cfg.beta(),
        p.trace()
    ))
}
