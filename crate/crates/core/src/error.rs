use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the library. Row and state indices are 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to 1 {deviation:+e}")]
    RowSumViolation { row: usize, deviation: f64 },
    #[error("linear system is numerically singular: {0}")]
    SingularSolve(String),
    #[error("power iteration did not reach a fixed point after {iterations} squarings (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid neighbor sets: {0}")]
    InvalidNeighbors(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("unknown test {0}, expected 1..=6")]
    UnknownTest(u32),
    #[error("decay fit is degenerate: {0}")]
    DegenerateFit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable identifier used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "not_square",
            Error::NonFinite { .. } => "non_finite",
            Error::NegativeEntry { .. } => "negative_entry",
            Error::RowSumViolation { .. } => "row_sum_violation",
            Error::SingularSolve(_) => "singular_solve",
            Error::NoConvergence { .. } => "no_convergence",
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::InvalidParameters(_) => "invalid_parameters",
            Error::InvalidNeighbors(_) => "invalid_neighbors",
            Error::InvalidConfig(_) => "invalid_config",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::UnknownMethod(_) => "unknown_method",
            Error::UnknownTest(_) => "unknown_test",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
