use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    /// A requested dispersion is too large for one of the target speeds.
    #[error("constraint violated: speed c = {speed} needs 2*kappa^2 < c, got kappa = {kappa}")]
    Constraint { speed: String, kappa: String },
    #[error("degenerate spec: {0}")]
    Degenerate(String),
    #[error("inversion failed at x = {x}, t = {t}: {reason}")]
    Inversion { x: String, t: String, reason: String },
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("{check} violated: {detail}")]
    Violation { check: String, detail: String },
}
