use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gram matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("gram matrix is not symmetric: entry ({row},{col}) = {a} but ({col},{row}) = {b}")]
    NotSymmetric { row: usize, col: usize, a: String, b: String },
    #[error("lattice is degenerate (determinant 0)")]
    Degenerate,
    #[error("matrix is singular")]
    Singular,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("p = 2 is not allowed here; the bound concerns odd primes")]
    EvenPrime,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("extension is not integral: {0}")]
    NonIntegral(String),
    #[error("gluing map does not reverse the discriminant form")]
    NotAntiIsometry,
    #[error("gluing map is not injective")]
    NotInjective,
    #[error("gluing map is not a well defined homomorphism")]
    NotWellDefined,
    #[error("discriminant form does not carry lattice coordinates")]
    NoLatticeCoordinates,
    #[error("curve of genus {g} and bi-degree ({d},{d}) is unconstructible: node count {n} < 0")]
    Unconstructible { g: i64, d: i64, n: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
