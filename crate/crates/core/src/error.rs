use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("graph order {order} exceeds the configured cap of {cap} points")]
    Capacity { order: usize, cap: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("image sequence is not a bijection on 0..{0}")]
    NotAPermutation(usize),

    #[error("{what} exceeded its budget of {cap}")]
    Budget { what: &'static str, cap: usize },

    #[error("generator g{generator} is only defined on square tori, got [{m},{n}]")]
    Shape { generator: u8, m: usize, n: usize },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported report schema version {0}")]
    Schema(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
