use std::fmt;

use thiserror::Error;

/// Location of a syntax error inside a polynomial string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Which resource limit stopped a computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapKind {
    Pairs(usize),
    Degree(u32),
    Timeout(std::time::Duration),
    Candidates(u128),
    MatrixSize(usize),
}

impl fmt::Display for CapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapKind::Pairs(n) => write!(f, "more than {n} S-pairs"),
            CapKind::Degree(d) => write!(f, "basis degree above {d}"),
            CapKind::Timeout(t) => write!(f, "timeout after {:.1}s", t.as_secs_f64()),
            CapKind::Candidates(n) => write!(f, "candidate count above {n}"),
            CapKind::MatrixSize(m) => write!(f, "matrix size above {m}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("variable set mismatch: [{0}] vs [{1}]")]
    VarSetMismatch(String, String),

    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("variable index {index} out of range for {arity} variables")]
    VariableIndex { index: usize, arity: usize },

    #[error("entry of degree {degree} where degree <= 1 is required{context}")]
    NotAffine { degree: u32, context: String },

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("{stage}: resource cap exceeded ({kind})")]
    CapExceeded { stage: String, kind: CapKind },

    #[error("size {size} out of range for {what} (max {max})")]
    SizeOutOfRange {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("field too small: {0}")]
    FieldTooSmall(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn cap(stage: impl Into<String>, kind: CapKind) -> Self {
        Error::CapExceeded {
            stage: stage.into(),
            kind,
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
