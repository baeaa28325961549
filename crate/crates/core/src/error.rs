use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation requires a nonempty word")]
    EmptyWord,

    #[error("word {0} must contain both letters")]
    SingleLetterWord(String),

    #[error("matrix {0} is not in D_1")]
    NotUnimodular(String),

    #[error("matrix {0} is singular")]
    SingularMatrix(String),

    #[error("matrix {matrix} is not in {class}")]
    NotInClass { matrix: String, class: String },

    #[error("xi(0, 0) is undefined")]
    XiUndefined,

    #[error("xi requires nonnegative arguments")]
    XiNegative,

    #[error("n must be at least {min}, got {got}")]
    InvalidN { min: u64, got: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: String,
        lo: String,
        hi: String,
    },

    #[error("invalid quadratic surd: {0}")]
    InvalidSurd(String),

    #[error("invalid continued fraction: {0}")]
    InvalidCf(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("state {0} is not a state of the transducer")]
    UnknownState(String),

    #[error("transducer for n = {expected} cannot run a matrix of determinant {got}")]
    DegreeMismatch { expected: u64, got: String },

    #[error("factorization of {0} left the doubly balanced class")]
    FactorizationViolation(String),

    #[error("reduction did not reach a doubly balanced state after {0} absorbed letters")]
    IterationCap(u64),

    #[error("value {0} does not fit the requested integer width")]
    Overflow(String),

    #[error("cannot write output: {0}")]
    Output(String),

    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn not_in(matrix: &impl std::fmt::Display, class: impl Into<String>) -> Self {
        Error::NotInClass {
            matrix: matrix.to_string(),
            class: class.into(),
        }
    }
}
