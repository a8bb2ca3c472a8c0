use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("the empty partition has no level")]
    EmptyPartition,
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("cycle type {0} is odd and is not a class of the alternating group")]
    OddClass(String),
    #[error("partition {0} is self-conjugate; its restriction to A_n splits")]
    SelfConjugate(String),
    #[error("group or size tags do not match")]
    TagMismatch,
    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("class function is not normalized (||f||_1 = {0})")]
    Unnormalized(String),
    #[error("normal set is empty")]
    EmptySet,
    #[error("malformed tuples: {0}")]
    MalformedTuples(String),
    #[error("degenerate witness: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
