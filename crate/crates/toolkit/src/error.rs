use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ToolkitError {
    #[error(transparent)]
    Core(#[from] lire_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

impl ToolkitError {
    /// Process exit code: 2 for usage and configuration errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use lire_core::Error as E;
        match self {
            ToolkitError::Usage(_) => 2,
            ToolkitError::Core(
                E::Config(_)
                | E::DimensionMismatch { .. }
                | E::IndexOutOfRange { .. }
                | E::NotAscending
                | E::Precondition(_)
                | E::TooManySubsets { .. },
            ) => 2,
            _ => 1,
        }
    }

    /// The reader of our output went away (e.g. `lire … | head`).
    pub fn is_broken_pipe(&self) -> bool {
        let kind = match self {
            ToolkitError::Io { source, .. } => Some(source.kind()),
            ToolkitError::Json(e) => e.io_error_kind(),
            ToolkitError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(io) => Some(io.kind()),
                _ => None,
            },
            _ => None,
        };
        kind == Some(std::io::ErrorKind::BrokenPipe)
    }
}

pub type Result<T> = std::result::Result<T, ToolkitError>;

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> ToolkitError + '_ {
    move |source| ToolkitError::Io {
        path: path.to_path_buf(),
        source,
    }
}
