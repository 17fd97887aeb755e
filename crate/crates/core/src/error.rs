use thiserror::Error;

/// Errors raised by the counting library.
///
/// The variants split into two families that callers (the CLI in particular)
/// treat differently: invalid input, and requests that exceed a configured
/// computational budget.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {q} is not congruent to 1 modulo ell = {ell}")]
    BadCongruence { q: u64, ell: u64 },
    #[error("field too large: q = {q} exceeds the table budget {limit}")]
    FieldTooLarge { q: u64, limit: u64 },
    #[error("zero input where a nonzero element or polynomial is required")]
    ZeroInput,
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("no conductor for trivial class")]
    TrivialClass,
    #[error("invalid Kummer class: {0}")]
    InvalidClass(String),
    #[error("L-series not a polynomial: trivial character")]
    TrivialCharacter,
    #[error("condition sets overlap at {0}")]
    OverlappingConditions(String),
    #[error("duplicate place in condition list: {0}")]
    DuplicatePlace(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("cache error: {0}")]
    Cache(String),
}

impl Error {
    /// True for errors caused by exceeding a computational budget rather
    /// than by malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_) | Error::FieldTooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
