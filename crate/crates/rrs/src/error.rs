use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] rrs_core::Error),
    #[error("alist line {line}: {message}")]
    Alist { line: usize, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error stems from bad user input rather than a failure
    /// while running.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Self::Validation(_)
                | Self::Alist { .. }
                | Self::Core(
                    rrs_core::Error::InvalidConfig(_)
                        | rrs_core::Error::InvalidParameter(_)
                        | rrs_core::Error::InvalidConstellation(_)
                        | rrs_core::Error::InvalidCode(_)
                        | rrs_core::Error::InvalidNoiseVariance(_)
                        | rrs_core::Error::DominatedSymbol { .. }
                )
        )
    }
}
