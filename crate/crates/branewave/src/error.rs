use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the supported domain of a function.
    #[error("domain error in {context}: {message}")]
    Domain { context: &'static str, message: String },

    /// A series or iteration failed to reach the requested tolerance.
    #[error("convergence failure in {context}: {message}")]
    Convergence { context: &'static str, message: String },

    /// Evaluation at a pole of the gamma function.
    #[error("gamma pole at nonpositive integer {0}")]
    GammaPole(f64),

    /// Mismatched grids between two objects that must share sampling.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A finite-difference run violated its stability bound.
    #[error("stability violation: {0}")]
    Stability(String),

    /// Invalid scenario or configuration input.
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { context, message: message.into() }
    }

    pub fn convergence(context: &'static str, message: impl Into<String>) -> Self {
        Error::Convergence { context, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
