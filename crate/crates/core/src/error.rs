use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid simple type {0}")]
    InvalidType(String),
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("point is not in the closed fundamental alcove")]
    NotInAlcove,
    #[error("Weyl group of order {order} exceeds the ceiling {ceiling}")]
    GroupTooLarge { order: u64, ceiling: u64 },
    #[error("unsupported finite field F_{p}^{e}")]
    UnsupportedField { p: u32, e: u32 },
    #[error("non-unit entry in torus element")]
    NonUnit,
    #[error("coefficient ring mismatch")]
    RingMismatch,
    #[error("matrix determinant is not one")]
    DeterminantNotOne,
    #[error("divided power coefficient is not integral: {0}")]
    IntegralityViolation(String),
    #[error("2^8 does not divide the composite discriminant: {0}")]
    DivisibilityViolation(String),
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("rank {0} too large for chamber enumeration")]
    RankTooLarge(usize),
    #[error("{0}")]
    Internal(String),
}
