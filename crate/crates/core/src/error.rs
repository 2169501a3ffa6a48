use thiserror::Error;

/// Failures of interval construction and interval arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("invalid endpoints: lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvalidEndpoints { lo: String, hi: String },
    #[error("endpoint is not a finite number")]
    NonFinite,
    #[error("arithmetic overflow: result leaves the finite range")]
    Overflow,
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("interval cannot be bisected")]
    NotBisectable,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is not representable in this backend")]
    NotRepresentable(String),
    #[error("cannot parse `{0}` as an interval")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a number")]
pub struct ParseScalarError(pub String);
