use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// `Re(N)` is not positive definite; carries its smallest eigenvalue.
    #[error("Gaussian integral does not converge: smallest eigenvalue of Re(N) is {min_eigenvalue:e}")]
    NotIntegrable { min_eigenvalue: f64 },

    #[error("quadratic form is singular or ill-conditioned (condition estimate {condition:e})")]
    SingularM { condition: f64 },

    #[error("operator is not trace class: {0}")]
    NotTraceClass(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("covector is not on the orbit (residual {residual:e})")]
    OffOrbit { residual: f64 },

    #[error("series order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("coefficient b[{index}] vanishes; use the series expansion instead")]
    DegenerateB { index: usize },

    #[error("Gaussian star product is singular at index {index} (|1 + u v / λ²| = {modulus:e})")]
    SingularProduct { index: usize, modulus: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("parse error: {0}")]
    Parse(String),
}
