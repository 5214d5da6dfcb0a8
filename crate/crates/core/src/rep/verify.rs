use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IrrepSet;
use crate::linalg::{unitarity_defect, CMatrix, C64, ZERO};

/// Tolerance for homomorphism and unitarity checks.
pub const REP_TOL: f64 = 1e-8;
/// Tolerance for character orthogonality and irreducibility.
pub const CHAR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    IdentityNotI,
    Homomorphism,
    Unitarity,
    Completeness,
    Orthogonality,
    Reducible,
    DimensionBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Offending irreps by label.
    pub irreps: Vec<usize>,
    pub magnitude: f64,
}

/// Outcome of [`verify_irrep_set`]; empty when everything holds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{:?} on {:?}: {:e}", v.kind, v.irreps, v.magnitude)?;
        }
        Ok(())
    }
}

/// Checks `ρ(1) = I`, sampled homomorphism, unitarity, `Σ dim² = |G|`,
/// character orthogonality, irreducibility (a random commutant average must
/// be scalar) and `dim ≤ √|G|`.
pub fn verify_irrep_set(set: &IrrepSet, samples: usize, seed: u64) -> VerifyReport {
    let group = set.group();
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut flag = |kind, irreps: Vec<usize>, magnitude: f64, tol: f64| {
        if magnitude > tol || magnitude.is_nan() {
            violations.push(Violation { kind, irreps, magnitude });
        }
    };
    let pairs: Vec<(usize, usize)> = (0..samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    for ir in set.irreps() {
        let d = ir.dim();
        flag(ViolationKind::IdentityNotI, vec![ir.label()], ir.matrix(0).max_diff(&CMatrix::identity(d)), REP_TOL);
        let hom = pairs
            .iter()
            .map(|&(a, b)| ir.matrix(a).mul_plain(ir.matrix(b)).max_diff(ir.matrix(group.mul(a, b))))
            .fold(0.0, f64::max);
        flag(ViolationKind::Homomorphism, vec![ir.label()], hom, REP_TOL);
        let unit = if ir.is_materialized() {
            (0..n).map(|g| unitarity_defect(ir.matrix(g))).fold(0.0, f64::max)
        } else {
            pairs.iter().map(|&(a, _)| unitarity_defect(ir.matrix(a))).fold(0.0, f64::max)
        };
        flag(ViolationKind::Unitarity, vec![ir.label()], unit, REP_TOL);
        flag(ViolationKind::DimensionBound, vec![ir.label()], ((d * d) as f64 - n as f64).max(0.0), 0.0);
        // commutant average of a random matrix
        let x = CMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let mut avg = CMatrix::zeros(d, d);
        for g in 0..n {
            let m = ir.matrix(g);
            avg.add_assign(&m.mul_plain(&x).mul_plain(&m.adjoint()));
        }
        let avg = avg.scale(C64::new(1.0 / n as f64, 0.0));
        let scalar = CMatrix::identity(d).scale(x.trace() / d as f64);
        flag(ViolationKind::Reducible, vec![ir.label()], avg.max_diff(&scalar), CHAR_TOL);
    }
    let sum = set.sum_of_squares();
    flag(ViolationKind::Completeness, vec![], (sum as f64 - n as f64).abs(), 0.0);
    let class_sizes: Vec<f64> = group.classes().iter().map(|c| c.len() as f64).collect();
    for (i, a) in set.irreps().iter().enumerate() {
        for (j, b) in set.irreps().iter().enumerate().skip(i) {
            let ip: C64 = a
                .character()
                .iter()
                .zip(b.character())
                .zip(&class_sizes)
                .map(|((x, y), &s)| x * y.conj() * s)
                .fold(ZERO, |acc, t| acc + t)
                / n as f64;
            let want = if i == j { 1.0 } else { 0.0 };
            flag(ViolationKind::Orthogonality, vec![i, j], (ip - want).norm(), CHAR_TOL);
        }
    }
    VerifyReport { violations }
}
