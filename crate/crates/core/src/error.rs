use std::path::PathBuf;

/// Errors raised across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration violates a modelling assumption (for example a
    /// multiplicative noise level whose support reaches -1).
    #[error("configuration rejected: {0}")]
    ConfigRejected(String),

    #[error("signal dominated by noise: |mean| = {mean:e} <= 10 * standard error ({std_err:e})")]
    SignalDominated { mean: f64, std_err: f64 },

    #[error("estimation failed: {0}")]
    EstimationFailed(String),

    #[error("non-finite step at iteration {iteration}")]
    NonFiniteStep { iteration: u64 },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
