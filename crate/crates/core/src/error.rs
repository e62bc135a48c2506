use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("series in {what} did not converge after {terms} terms (last estimate change {change:e})")]
    Convergence {
        what: &'static str,
        terms: u64,
        change: f64,
    },

    #[error("singular denominator in {what} (value {value:e})")]
    SingularDenominator { what: &'static str, value: f64 },

    #[error("unsupported filling {m}/{n}: {reason}")]
    UnsupportedFilling { m: u32, n: u32, reason: &'static str },

    #[error("invalid filling {m}/{n}: {reason}")]
    InvalidFilling { m: u32, n: u32, reason: &'static str },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("size limit exceeded: {what} needs {needed}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("defect window too small: {0}")]
    Window(String),

    #[error("hop blocked by hard-core occupancy: {0}")]
    HopBlocked(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
