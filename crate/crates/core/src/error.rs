use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("theta = {theta} is outside the interior of the MGF domain {domain}")]
    Domain { theta: f64, domain: String },

    #[error("model is almost surely constant")]
    DegenerateModel,

    #[error("t = {t} is not strictly inside the essential range ({lower}, {upper})")]
    OutOfRange { t: f64, lower: String, upper: String },

    #[error("the {0} essential bound is infinite")]
    UnboundedSide(&'static str),

    #[error("support window of {requested} entries exceeds the cap of {cap}")]
    ResourceLimit { requested: u64, cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("solver failed to converge: {0}")]
    SolverFailed(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
