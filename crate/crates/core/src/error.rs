use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into the outcome classes the CLI maps onto exit codes:
/// input problems, failed dimension hypotheses, construction failures, and
/// internal verification failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for a space with {n_points} points")]
    IndexOutOfRange { index: usize, n_points: usize },

    #[error("invalid input at `{path}`: {message}")]
    InvalidInput { path: String, message: String },

    #[error("empty set passed to {0}")]
    EmptySet(&'static str),

    #[error("group enumeration exceeded the cap of {cap} elements; pass an explicit finite element list instead")]
    GroupCapExceeded { cap: usize },

    #[error("partitions are over different grounds ({left} vs {right} labels)")]
    GroundMismatch { left: usize, right: usize },

    #[error("pair ({0}, {0}) lies on the diagonal")]
    DiagonalPair(usize),

    #[error("block partition is not intersective")]
    NotIntersective,

    #[error("map is not injective: {0}")]
    NotInjective(String),

    #[error("map is not a bijection on the cover support: {0}")]
    NotBijective(String),

    #[error("cover construction infeasible: {0}")]
    CoverInfeasible(String),

    #[error("dimension hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no free grid value: {0}")]
    GridInfeasible(String),

    #[error("value budget exhausted at block {block}: {message}")]
    BudgetExhausted { block: usize, message: String },

    #[error("internal verification failure: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            path: path.into(),
            message: message.into(),
        }
    }
}
