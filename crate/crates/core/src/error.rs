use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("operation requires a nonempty partition")]
    EmptyPartition,

    #[error("weight mismatch: {left} vs {right}")]
    WeightMismatch { left: u64, right: u64 },

    #[error("{0} must be positive")]
    Zero(&'static str),

    #[error("partition {inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },

    #[error("invalid moment spec: {0}")]
    InvalidMomentSpec(String),

    #[error("{what} = {got} exceeds the supported maximum {max}")]
    TooLarge {
        what: &'static str,
        got: u64,
        max: u64,
    },

    #[error("unknown verification suite {0:?}")]
    UnknownSuite(String),

    #[error("the trivial character (empty tail) has no asymptotic expansion")]
    TrivialCharacter,

    /// An exact path produced a value that is not a non-negative integer.
    /// Always an internal bug.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}
