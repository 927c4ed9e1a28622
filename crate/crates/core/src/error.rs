use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element id {id} out of range for a lattice of size {size}")]
    OutOfRange { id: usize, size: usize },
    #[error("cover relation contains a cycle through element {0}")]
    CycleDetected(usize),
    #[error("cover ({0}, {1}) is implied by transitivity")]
    RedundantCover(usize, usize),
    #[error("not a lattice: elements {a} and {b} have no {bound}")]
    NotALattice { a: usize, b: usize, bound: Bound },
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("elements {0} and {1} are not comparable ({0} is not below {1})")]
    NotComparable(usize, usize),
    #[error("sequence is not a chain: {0}")]
    NotAChain(String),
    #[error("chain is not a maximal chain of left modular elements: {0}")]
    NotLeftModularChain(String),
    #[error("partition is not a lattice congruence: {0}")]
    IncompatiblePartition(String),
    #[error("{what} exceeds the cap of {cap}")]
    TooLarge { what: String, cap: usize },
    #[error("requested size {requested} exceeds the enumeration cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("unknown lattice family `{0}`")]
    UnknownFamily(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("down-set dimensions {got:?} do not match tables {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("catalog index entry {key}: {reason}")]
    CorruptIndex { key: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid lattice file: {0}")]
    Validation(Box<Error>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Meet,
    Join,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Meet => f.write_str("unique meet"),
            Bound::Join => f.write_str("unique join"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
