use thiserror::Error;

/// A numerical invariant that an operator, measurement or table failed.
///
/// Each variant carries the magnitude of the violation so callers can
/// report how far off the offending object was.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is not 1 (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("effect exceeds identity (max eigenvalue {max_eigenvalue})")]
    EffectAboveIdentity { max_eigenvalue: f64 },

    #[error("not unitary (max deviation of U^dagger U from I: {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("POVM effects do not sum to identity (max deviation {deviation:e})")]
    PovmIncomplete { deviation: f64 },

    #[error("POVM has no effects")]
    EmptyPovm,

    #[error("Bloch vector has norm {norm} > 1")]
    BlochNorm { norm: f64 },

    #[error("non-finite entry in matrix")]
    NonFinite,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime dimension")]
    NotPrime(u32),

    #[error("dimension {0} is not supported here: {1}")]
    UnsupportedDimension(u32, &'static str),

    #[error("value {value} out of range for {what} (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },

    #[error("{context}: {source}")]
    Invalid {
        context: String,
        #[source]
        source: ValidationError,
    },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("search of {candidates} candidates exceeds budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("ill-conditioned certificate: {0}")]
    IllConditioned(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(context: impl Into<String>, source: ValidationError) -> Self {
        Error::Invalid {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn out_of_range(what: &'static str, value: u64, min: u64, max: u64) -> Self {
        Error::OutOfRange {
            what,
            value,
            min,
            max,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
