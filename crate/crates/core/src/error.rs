use thiserror::Error;

/// Errors produced anywhere in the preperiodic-point pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("not a morphism: {0}")]
    NotAMorphism(String),

    #[error("indeterminate point {0}: every coordinate of the image vanishes")]
    IndeterminatePoint(String),

    #[error("chart boundary: {0}")]
    ChartBoundary(String),

    #[error("degenerate lattice")]
    DegenerateLattice,

    #[error("degree cap exceeded: degree {degree} > cap {cap}")]
    DegreeCap { degree: u64, cap: u64 },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("degeneracy detected: {0}")]
    Degeneracy(String),

    #[error("fewer than {wanted} good primes up to {max_prime}; bad primes found: {bad:?}")]
    NotEnoughPrimes { wanted: usize, max_prime: u64, bad: Vec<u64> },

    #[error("bad reduction at p = {0}")]
    BadPrime(u64),

    #[error("empty prime list")]
    EmptyPrimeList,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("unsound configuration: {0}")]
    UnsoundConfig(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
