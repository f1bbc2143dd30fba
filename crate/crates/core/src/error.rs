use thiserror::Error;

/// A location in source text, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{loc}: syntax error: {msg}")]
    Syntax { loc: Location, msg: String },

    #[error("{loc}: unknown identifier `{name}`")]
    UnknownIdentifier { loc: Location, name: String },

    #[error("{loc}: `{name}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        loc: Location,
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("{loc}: `{name}` is used with arity {found} but earlier with arity {expected}")]
    InconsistentArity {
        loc: Location,
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("{loc}: `{name}` is declared as a variable and used as a function symbol")]
    AmbiguousIdentifier { loc: Location, name: String },

    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("invalid position {0}")]
    InvalidPosition(String),

    #[error("invalid rule {rule}: {reason}")]
    InvalidRule { rule: String, reason: String },

    #[error("normalization exceeded {limit} steps starting from {term}")]
    StepBudgetExceeded { limit: usize, term: String },

    #[error("critical pair {index} is not joinable: {t} and {s} have distinct normal forms")]
    NonJoinableCp { index: usize, t: String, s: String },

    #[error("system is not locally confluent: {0} critical pair(s) do not join")]
    NotComplete(usize),

    #[error("degree {degree} ({factors}) is neither 0 nor a prime, so the bound does not apply; exploratory only, not backed by the theorem: reduce D(R) modulo each prime factor of the degree")]
    CompositeDegree { degree: u64, factors: String },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("Tietze clause ({clause}) violated: {reason}")]
    SideConditionViolated { clause: u8, reason: String },

    #[error("step {step} (line {line}): {source}")]
    TietzeStep {
        step: usize,
        line: usize,
        source: Box<Error>,
    },

    #[error("conversion search exhausted its budget of {0} nodes")]
    SearchBudgetExceeded(usize),

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error class. Codes are distinct per class
    /// and never 0; 2 is left to command-line usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::UnknownIdentifier { .. }
            | Error::ArityMismatch { .. }
            | Error::InconsistentArity { .. }
            | Error::AmbiguousIdentifier { .. }
            | Error::DuplicateSymbol(_)
            | Error::InvalidRule { .. } => 3,
            Error::MalformedMatrix(_) => 4,
            Error::Io(_) => 5,
            Error::NotComplete(_) | Error::NonJoinableCp { .. } => 6,
            Error::CompositeDegree { .. } | Error::NotPrime(_) => 7,
            Error::StepBudgetExceeded { .. } => 8,
            Error::SignatureMismatch(_) => 9,
            Error::SideConditionViolated { .. } => 10,
            Error::SearchBudgetExceeded(_) => 11,
            Error::TietzeStep { source, .. } => source.exit_code(),
            Error::InvalidPosition(_) | Error::Internal(_) => 70,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
