use thiserror::Error;

/// Errors produced anywhere in the transform engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("unsupported group descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("descriptor is not a matrix group: {0}")]
    WrongDescriptor(String),
    #[error("group order {order} exceeds cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("no suitable subgroup pair found")]
    NotFound,
    #[error("subgroup search failed: {0}")]
    SearchFailed(String),
    #[error("no coprime split into subgroups found")]
    SplitNotFound,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular (pivot {pivot:e})")]
    Singular { pivot: f64 },
    #[error("irrep set is incomplete: sum of squared dimensions {sum} != group order {order}")]
    IncompleteIrrepSet { sum: usize, order: usize },
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("checksum mismatch: expected {expected}, computed {computed}")]
    ChecksumMismatch { expected: String, computed: String },
    #[error("group is not abelian")]
    NotAbelian,
    #[error("multiplicity is not an integer (residual {residual:e})")]
    NonIntegerMultiplicity { residual: f64 },
    #[error("projection rank {found} differs from expected {expected}")]
    RankDeficiency { expected: usize, found: usize },
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("coefficient mass {mass:e} outside the translated product set")]
    SupportViolation { mass: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
