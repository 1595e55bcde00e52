use thiserror::Error;

/// Errors raised by the thermometry kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A `SystemParams` invariant is violated.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    /// Covariance violates the uncertainty relation `det C >= 1/4`.
    #[error("unphysical Gaussian state: det C = {det} < 1/4")]
    UnphysicalState { det: f64 },

    /// A QFI formula divides by zero for a pure state.
    #[error("singular state: {0}")]
    SingularState(String),

    /// The three QFI formulas disagree beyond tolerance.
    #[error("QFI formulas disagree: V1 = {v1}, V2 = {v2}, V3 = {v3}")]
    InconsistentQfi { v1: f64, v2: f64, v3: f64 },

    /// No stable normal-phase steady state exists.
    #[error("no steady state: {0}")]
    NoSteadyState(String),

    /// A linear-algebra routine failed.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Arguments that do not belong together.
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
