use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Dimension, coupling-count or overlap violations.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// Parameters outside the domain where the metric exists, or a spectrum
    /// that is not real and simple where one is required.
    #[error("outside the unitarity domain: {0}")]
    OutsideDomain(String),

    #[error("pole of f(x) = (1 - x)/(1 + x) at x = -1")]
    Pole,

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("fixture integrity failure: {0}")]
    Fixture(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
