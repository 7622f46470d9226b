use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("weight {0} is not an even integer >= 4")]
    InvalidWeight(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("cohen_h needs r >= 2, got {0}")]
    CohenOrder(u32),
    #[error("truncation {have} is too small, need at least {need}")]
    Truncation { have: u64, need: u64 },
    #[error("coefficient index {0} lies beyond the truncation bound")]
    BeyondTruncation(String),
    #[error("coefficient c({0}) is missing from the lift data")]
    MissingCoefficient(u64),
    #[error("coset representative has non-positive determinant")]
    NonPositiveDeterminant,
    #[error("numeric domain violation: {0}")]
    Domain(String),
}
