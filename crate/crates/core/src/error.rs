use thiserror::Error;

/// Everything that can go wrong inside the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in F_p")]
    DivisionByZero,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("digit index out of level range")]
    DigitIndexOutOfRange,
    #[error("exponent entry {0} is not below p^e")]
    ExponentOutOfRange(u64),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("exponent overflow (limit 2^31)")]
    ExponentOverflow,
    #[error("invalid variable list: {0}")]
    InvalidVariables(String),

    #[error("polynomials or ideals live in different rings")]
    ContextMismatch,

    #[error("invariants undefined for trivial ideal")]
    TrivialIdeal,
    #[error("J must be a proper ideal")]
    ImproperTarget,
    #[error("radical containment failed: generator {generator} has no power in J up to exponent {bound}")]
    RadicalContainment { generator: String, bound: u64 },
    #[error("no stable exponent found below cap {cap}")]
    NoStableExponent { cap: u32, checked: u32 },
    #[error("malformed lambda: {0}")]
    MalformedLambda(String),
    #[error("precondition violation: {0}")]
    Precondition(String),
    #[error("cannot verify with unresolved data")]
    Unresolved,
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
