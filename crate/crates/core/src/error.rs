use thiserror::Error;

/// Errors raised by the algebraic and combinatorial routines of this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcnError {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("gcd({q}, {m}) != 1, multiplicative order undefined")]
    NotCoprime { q: u64, m: u64 },

    #[error("integer with {bits} bits exceeds the supported factoring range")]
    IntegerTooLarge { bits: u64 },

    #[error("attempted to invert zero")]
    DivisionByZero,

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("polynomial must be monic")]
    NotMonic,

    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,

    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),

    #[error("degree mismatch: expected {expected}, got {actual}")]
    DegreeMismatch { expected: usize, actual: usize },

    #[error("{divisor} does not divide {value}")]
    NotADivisor { divisor: u64, value: u64 },

    #[error("characteristic {p} divides {m}")]
    CharacteristicDivides { p: u64, m: u64 },

    #[error("coefficient does not lie in the subfield fixed by sigma^{0}")]
    OutsideSubfield(u64),

    #[error("element is not in the cyclotomic module C_({k},{t})")]
    NotInModule { k: u64, t: u64 },

    #[error("field of order {size} exceeds the configured ceiling {ceiling}")]
    CeilingExceeded { size: String, ceiling: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("candidate space exhausted for p={p}, degree {degree}")]
    SearchExhausted { p: u64, degree: usize },

    #[error("no completely normal element found")]
    NoCompletelyNormalElement,

    #[error("checkpoint I/O: {0}")]
    Checkpoint(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = PcnError> = std::result::Result<T, E>;
