use thiserror::Error;

use crate::zn::PairIssue;

/// Coarse classification of an [`Error`], used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Resource,
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Schema(String),

    #[error("alphabet: {0}")]
    Alphabet(String),

    #[error("probability vector: {0}")]
    Weights(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),

    #[error("edge {from}->{to} has an empty label")]
    EmptyLabel { from: String, to: String },

    #[error("graphs have different alphabets")]
    AlphabetMismatch,

    #[error("operation requires a letter-labeled graph")]
    NotLetterLabeled,

    #[error("operation requires a right-resolving graph")]
    NotRightResolving,

    #[error("invalid affine pair: {}", format_issues(.0))]
    InvalidPair(Vec<PairIssue>),

    #[error("vector has dimension {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },

    #[error("unsupported dimension {0} (only n = 2 can be rasterized)")]
    UnsupportedDimension(usize),

    #[error("nucleus: {0}")]
    Nucleus(String),

    #[error("nucleus has no identity state `{0}`")]
    MissingIdentity(String),

    #[error("identity state does not act trivially on letter {0}")]
    IdentityNotTrivial(usize),

    #[error("state `{from}` has a transition to undeclared state `{to}`")]
    UndeclaredState { from: String, to: String },

    #[error("cell {cell} is not larger than the piece diameter bound; minimal admissible cell is {minimal}")]
    CellTooSmall { cell: f64, minimal: f64 },

    #[error("{what} exceeded cap of {cap}")]
    Cap { what: &'static str, cap: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Cap { .. } => ErrorKind::Resource,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }
}

fn format_issues(issues: &[PairIssue]) -> String {
    issues
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
