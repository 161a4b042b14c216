use thiserror::Error;

use crate::qseries::Exponent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a series that vanishes to its truncation order")]
    DivisionByZeroSeries,
    #[error("series is zero up to its truncation order")]
    ZeroSeries,
    #[error("exponent grid {0} does not divide 2; twist needs half-integral exponents")]
    UnsupportedGrid(u64),
    #[error("requested order {requested} exceeds the justified truncation {available}")]
    InsufficientPrecision {
        requested: Exponent,
        available: Exponent,
    },
    #[error("Frobenius recurrence is resonant at k = {0}")]
    Resonance(usize),
    #[error("Moebius coefficients have zero determinant")]
    DegenerateMobius,
    #[error("level {0} is outside 2..=5")]
    LevelOutOfRange(i64),
    #[error("degree (6n - m) * nu / 12 is not an integer for m = {m}, n = {n}")]
    NonIntegralDegree { m: i64, n: i64 },
    #[error("outside the evaluation domain: {0}")]
    DomainError(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
