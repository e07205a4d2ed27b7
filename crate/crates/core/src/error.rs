use std::path::PathBuf;

use crate::seqcore::Sequence;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("item {item} appears more than once but repeats are not allowed")]
    RepeatViolation { item: usize },

    #[error("item {item} is outside the ground set of size {n}")]
    ItemOutOfRange { item: usize, n: usize },

    #[error("sequence of length {len} exceeds the {max} stages defined by the instance")]
    StageOutOfRange { len: usize, max: usize },

    #[error("evaluation budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("f({t}) = 0, curvature ratio is undefined")]
    DegenerateInstance { t: Sequence },

    #[error("enumeration needs {count} candidates, guard is {guard}")]
    TooLarge { count: u128, guard: u128 },

    #[error("time-sorted optimum has not been validated against full enumeration")]
    OracleUnvalidated,

    #[error("time-sorted optimum disagrees with full enumeration: {0}")]
    CrossCheckFailed(String),

    #[error("sign test needs at least one non-tied pair")]
    DegenerateSignTest,

    #[error("line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("filtering removed every {what}")]
    EmptyResult { what: &'static str },

    #[error("graph has a cycle through vertex {vertex}")]
    Cyclic { vertex: usize },

    #[error("GSEMO archive invariant violated at iteration {iteration}: {reason}")]
    InvariantViolation { iteration: u64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    IoPlain(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
