use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: unknown label `{label}`")]
    UnknownLabel { line: usize, label: String },

    #[error("line {line}: label `{label}` appears in more than one tier")]
    TierOverlap { line: usize, label: String },

    #[error("{scf}: precondition violated: {condition}")]
    Precondition { scf: String, condition: String },

    #[error("tournament precondition violated: {a} and {b} are tied")]
    Tie { a: usize, b: usize },

    #[error("search space of {size} exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("pairwiseness violation: {0}")]
    Pairwiseness(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("implication lattice contradiction: {0}")]
    Contradiction(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precondition(scf: &str, condition: impl Into<String>) -> Self {
        Error::Precondition {
            scf: scf.to_string(),
            condition: condition.into(),
        }
    }

    /// Errors that mean "the rule is undefined on this input" rather than a bug.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition { .. } | Error::Tie { .. })
    }
}
