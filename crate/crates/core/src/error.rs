use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure mode of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("diagnostic: {0}")]
    Diagnostic(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("no admissible rho at order {order}: {reason}")]
    Selection { order: usize, reason: String },
    #[error("no fixed point in (0,1) at order {order}")]
    FixedPoint { order: usize },
    #[error("degenerate Pade system [{l}/{m}] (numerical rank {rank} of {m})")]
    Degenerate { l: usize, m: usize, rank: usize },
    #[error("evaluation at a pole: |denominator| = {0:e}")]
    Pole(f64),
    #[error("summability violation: {0}")]
    Summability(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("fit failure: {0}")]
    Fit(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
