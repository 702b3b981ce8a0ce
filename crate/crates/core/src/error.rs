use thiserror::Error;

use crate::kind::GroupKind;

/// Errors raised by the matrix, group, presentation and lift machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("level must be positive")]
    ZeroLevel,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("matrix ({a}, {b}; {c}, {d}) does not have determinant 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64 },
    #[error("mixed moduli {0} and {1}")]
    ModulusMismatch(u32, u32),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u32, u32),
    #[error("CRT components multiply to {product}, expected {expected}")]
    CrtProductMismatch { product: u64, expected: u64 },
    #[error("level {level} does not divide modulus {modulus}")]
    LevelNotDividingModulus { level: u32, modulus: u32 },
    #[error("modulus {modulus} exceeds the engine cap {cap}; use formula mode")]
    ModulusCapExceeded { modulus: u64, cap: u64 },
    #[error("index exceeds the configured bound {0}")]
    IndexBoundExceeded(usize),
    #[error("Farey refinement exceeded {0} insertions")]
    RefinementCapExceeded(usize),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("the full preimage is not an index-2 lift")]
    FullPreimage,
    #[error("{kind} of level {level} has no noncongruence lift")]
    NoNoncongruenceLift { kind: GroupKind, level: u32 },
    #[error("{count} lifts exceed the enumeration cap {cap}")]
    EnumerationTooLarge { count: String, cap: u64 },
    #[error("{0} is not contained in {1}")]
    NotASubgroup(String, String),
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
