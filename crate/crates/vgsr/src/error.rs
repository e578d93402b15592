use std::path::{Path, PathBuf};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {detail}", path.display())]
    Format { path: PathBuf, detail: String },
    #[error("{}: corrupted: {detail}", path.display())]
    Corrupt { path: PathBuf, detail: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] vgsr_core::Error),
}

impl Error {
    pub fn format(path: &Path, detail: impl Into<String>) -> Self {
        Self::Format {
            path: path.into(),
            detail: detail.into(),
        }
    }

    pub fn corrupt(path: &Path, detail: impl Into<String>) -> Self {
        Self::Corrupt {
            path: path.into(),
            detail: detail.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Short category name used in the one-line error output.
    pub fn kind(&self) -> &'static str {
        use vgsr_core::Error as E;
        match self {
            Error::Usage(_) | Error::Core(E::Usage(_) | E::Lookup { .. }) => "usage",
            Error::Core(E::Numerical(_)) => "numerical",
            Error::Io { .. } => "io",
            Error::Corrupt { .. } => "corrupt",
            Error::Format { .. } | Error::Core(_) => "data",
        }
    }

    /// 1 usage, 2 data or format, 3 numerical.
    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "usage" => 1,
            "numerical" => 3,
            _ => 2,
        }
    }
}
