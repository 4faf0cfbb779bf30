//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Configuration rejected during validation or model assembly.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Attractive van der Waals coefficients are not supported.
    #[error("unsupported interaction: {0}")]
    UnsupportedInteraction(String),

    /// A numerical routine failed (eigensolver, quadrature, ...).
    #[error("numerical failure: {0}")]
    Numerics(String),

    /// Band labelling could not identify the requested bands.
    #[error("band labelling failed: {0}")]
    Labelling(String),

    /// Mismatched dimensions between model, state or operator.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Requested observable name is not recognized.
    #[error("unknown observable: {0}")]
    UnknownObservable(String),

    /// g²(τ) denominator vanished.
    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    /// Long-time integration hit its cap before reaching the residual target.
    #[error("steady state not converged: residual {residual:.3e} at t = {t_reached}")]
    NonConvergence { residual: f64, t_reached: f64 },

    /// Trace drift exceeded tolerance; rerun with a smaller step.
    #[error("step size too large: {0}")]
    StepSize(String),

    /// Variational state left the feasible set.
    #[error("constraint violated at site {site}: {msg}")]
    Constraint { site: usize, msg: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for config problems, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_)
            | Error::UnsupportedInteraction(_)
            | Error::Dimension(_)
            | Error::UnknownObservable(_)
            | Error::Io(_)
            | Error::Serde(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
