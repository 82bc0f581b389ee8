use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("mesh parse error at line {line}: {msg}")]
    MeshParse { line: usize, msg: String },

    #[error("mesh validation failed: {0}")]
    MeshInvalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("no sign change in bracket [{lo}, {hi}]: f(lo)={flo:.3e}, f(hi)={fhi:.3e}")]
    BracketFailure { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("dimension {dim} exceeds dense solver cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("degenerate triangle {index}: area {area:.3e} below threshold")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("linear solver failure: {0}")]
    SolverFailure(String),

    #[error("basis is not orthonormal: max Gram deviation {0:.3e}")]
    NonOrthonormalBasis(f64),

    #[error("cluster not gap-separated: {0}")]
    ClusterGap(String),

    #[error("boundary form not positive definite: smallest eigenvalue {0:.3e}")]
    GramNotPositive(f64),

    #[error("projection onto the cluster space too small: |Pi phi| = {0:.3e} < 1/2")]
    ProjectionTooSmall(f64),

    #[error("insufficient grid: need at least {need} usable points, got {got}")]
    InsufficientGrid { need: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown check id `{id}`; valid ids: {valid}")]
    UnknownCheck { id: String, valid: String },

    #[error("backend/domain mismatch: {0}")]
    BackendMismatch(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
