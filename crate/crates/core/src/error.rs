use alloc::string::String;

/// Errors reported by the recovery toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("feature index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },
    #[error("support entries must be strictly ascending")]
    NotAscending,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("singular system: {0}")]
    Singular(&'static str),
    #[error("{subsets} subsets of order {order} exceed the enumeration limit of {limit}; use Monte-Carlo sampling")]
    TooManySubsets { order: usize, subsets: u128, limit: u64 },
    #[error("outside formula domain: {0}")]
    Domain(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
