use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("invalid number of sites {n_sites}: {reason}")]
    InvalidSiteCount { n_sites: usize, reason: &'static str },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid dimer covering: {0}")]
    InvalidCovering(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("{what} did not converge (best residual {residual:e})")]
    NonConvergence { what: &'static str, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
