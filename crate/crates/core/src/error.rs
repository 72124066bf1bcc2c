use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// Vertex indices carried in variants are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix side {0} is outside the supported range 2..=64")]
    SizeOutOfRange(usize),

    #[error("the zero matrix is not a member of the matrix family")]
    ZeroMatrix,

    #[error("side mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("argument {value} out of range ({expected})")]
    OutOfRange { value: usize, expected: &'static str },

    #[error("index {index} out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("condition P1 fails: column {witness} is nonzero but row {witness} is zero")]
    P1Violation { witness: usize },

    #[error("condition P2 fails: vertex {vertex} lies on two distinct cycles")]
    P2Violation { vertex: usize },

    #[error("vertex {0} lies on no cycle")]
    NotOnCycle(usize),

    #[error("norm sequence is unbounded")]
    Unbounded,

    #[error("side {size} exceeds the canonicalization limit {limit}")]
    CanonicalLimit { size: usize, limit: usize },

    #[error("{count} words exceed the enumeration cap {cap}")]
    WordCap { count: String, cap: usize },

    #[error("letter {letter} outside alphabet 1..={alphabet}")]
    AlphabetMismatch { letter: usize, alphabet: usize },

    #[error("finite words agree on the common prefix but differ in length")]
    LengthMismatch,

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("norm sequence did not stabilize within {0} steps")]
    NoStabilization(usize),
}

impl Error {
    /// True for errors that signal a violated mathematical precondition
    /// rather than malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::P1Violation { .. }
                | Error::P2Violation { .. }
                | Error::NotOnCycle(_)
                | Error::Unbounded
                | Error::ZeroMatrix
                | Error::CanonicalLimit { .. }
                | Error::WordCap { .. }
                | Error::NoStabilization(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
