use thiserror::Error;

/// Errors raised by the numerical kernels, channel models and scenario builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{backend} did not converge: {detail}")]
    NoConvergence { backend: &'static str, detail: String },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown preset `{id}`; valid presets: {valid}")]
    UnknownPreset { id: String, valid: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

pub(crate) fn no_convergence(backend: &'static str, detail: impl Into<String>) -> Error {
    Error::NoConvergence {
        backend,
        detail: detail.into(),
    }
}
