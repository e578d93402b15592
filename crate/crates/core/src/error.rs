use alloc::string::String;

use thiserror::Error;

/// Errors raised by the algorithmic core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A tensor or matrix axis has the wrong extent.
    #[error("dimension error on {axis}: {detail}")]
    Dimension { axis: &'static str, detail: String },
    /// The caller asked for something the current state cannot provide.
    #[error("usage error: {0}")]
    Usage(String),
    /// NaN or infinity showed up where finite values are required.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A named item (keyword, word, utterance) is not known.
    #[error("unknown {kind}: {name}")]
    Lookup { kind: &'static str, name: String },
    /// Malformed input data.
    #[error("invalid input: {0}")]
    Input(String),
    /// The quantity is mathematically undefined for these inputs.
    #[error("undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(axis: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension {
            axis,
            detail: detail.into(),
        }
    }

    pub(crate) fn lookup(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Lookup {
            kind,
            name: name.into(),
        }
    }
}
