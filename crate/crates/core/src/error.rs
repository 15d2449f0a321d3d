use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("subfield order {0} exceeds the supported bound {max}", max = crate::ff::MAX_SUB_ORDER)]
    TooLarge(u64),
    #[error("modulus is not irreducible: {0}")]
    ReducibleModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("cannot parse element {input:?}: {reason}")]
    ParseElement { input: String, reason: String },
    #[error("cannot parse polynomial {input:?}: {reason}")]
    ParsePoly { input: String, reason: String },
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("exponent overflow")]
    Overflow,
    #[error("degenerate Möbius map: determinant is zero")]
    Degenerate,
    #[error("{d} does not divide {order_minus_one}")]
    InvalidDivisor { d: u64, order_minus_one: u64 },
    #[error("spec violation: {0}")]
    SpecViolation(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}
