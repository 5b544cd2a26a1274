//! Error type shared by the whole library.

/// Everything that can go wrong in the library, from malformed group specs to
/// text-format parse failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A coordinate list had the wrong length for its group.
    #[error("dimension mismatch: group has {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two operands live in different groups.
    #[error("group mismatch: operands live in different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    /// An operation that needs a nonempty set received an empty one.
    #[error("empty point set")]
    EmptySet,

    /// A parameter was outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Integer overflow while building or combining coordinates.
    #[error("coordinate overflow: {0}")]
    Overflow(String),

    /// Text input (point-set file or config) failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An exhaustive search was requested for a set above the safety cap.
    #[error("set too large for exhaustive search: |A| = {size} exceeds cap {cap} (raise the cap or use the greedy strategy)")]
    ExhaustiveCap { size: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
