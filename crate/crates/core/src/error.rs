use std::fmt;

use thiserror::Error;

/// One violated structural invariant of an SCM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Cycle { involved: Vec<usize> },
    BadParent { var: usize, parent: usize, reason: &'static str },
    BadNoise { var: usize, reason: String },
    BadArity { var: usize, gate: &'static str, arity: usize },
    BadId { position: usize, id: usize },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::Cycle { .. } => "CYCLE",
            Violation::BadParent { .. } => "BAD_PARENT",
            Violation::BadNoise { .. } => "BAD_NOISE",
            Violation::BadArity { .. } => "ARITY_MISMATCH",
            Violation::BadId { .. } => "BAD_ID",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { involved } => write!(f, "CYCLE: no topological order (variables {involved:?})"),
            Violation::BadParent { var, parent, reason } => {
                write!(f, "BAD_PARENT: variable {var} parent {parent}: {reason}")
            }
            Violation::BadNoise { var, reason } => write!(f, "BAD_NOISE: variable {var}: {reason}"),
            Violation::BadArity { var, gate, arity } => {
                write!(f, "ARITY_MISMATCH: variable {var}: gate {gate} does not accept {arity} inputs")
            }
            Violation::BadId { position, id } => write!(f, "BAD_ID: entry {position} has id {id}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid SCM: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("SUPPORT_TOO_LARGE: {points} exogenous points exceeds cap {cap}")]
    SupportTooLarge { points: u128, cap: u64 },
    #[error("N_TOO_LARGE: n={n} exceeds cap {cap}")]
    NTooLarge { n: usize, cap: usize },
    #[error("M_TOO_LARGE: m={m} exceeds cap {cap}")]
    MTooLarge { m: usize, cap: usize },
    #[error("ARITY_MISMATCH: gate {gate} does not accept {arity} inputs")]
    ArityMismatch { gate: &'static str, arity: usize },
    #[error("BAD_INTERVENTION: variable {var} out of range for n={n}")]
    BadIntervention { var: usize, n: usize },
    #[error("BAD_POSITION: position {position} out of range for {n_bits} bits")]
    BadPosition { position: usize, n_bits: usize },
    #[error("LENGTH_MISMATCH: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("KIND_MISMATCH: expected {expected}, found {found}")]
    KindMismatch { expected: &'static str, found: &'static str },
    #[error("NOT_TREE_LIKE: {0}")]
    NotTreeLike(String),
    #[error("AMBIGUOUS_PARENT: node {node} has several smallest ancestors")]
    AmbiguousParent { node: usize },
    #[error("NOT_BIPARTITE_LIKE: {0}")]
    NotBipartiteLike(String),
    #[error("NOT_XOR_LIKE: {0}")]
    NotXorLike(String),
    #[error("INVALID_TREE: {0}")]
    InvalidTree(String),
    #[error("INVALID_SEQUENCE: {0}")]
    InvalidSequence(String),
    #[error("NOT_MEMBER: {0}")]
    NotMember(String),
    #[error("BAD_RANGE: {0}")]
    BadRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether this error is an enumeration/size guardrail rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::SupportTooLarge { .. } | Error::NTooLarge { .. } | Error::MTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
