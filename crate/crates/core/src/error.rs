use std::fmt;
use std::path::PathBuf;

/// Stage of the end-to-end pipeline an error surfaced in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Alignment,
    Classification,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Alignment => "alignment",
            Stage::Classification => "classification",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible problem: {targets} target samples cannot cover {classes} classes (need n_t >= C)")]
    Infeasible { targets: usize, classes: usize },

    #[error("class {class} has no source samples")]
    MissingClass { class: usize },

    #[error("invalid state: {0}")]
    State(String),

    #[error("instance too large: {0}")]
    Capacity(String),

    #[error("eigen decomposition did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("{path}: line {line}{}: {message}", column.as_ref().map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        path: PathBuf,
        line: u64,
        column: Option<String>,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{stage} stage: {inner}")]
    Pipeline {
        stage: Stage,
        #[source]
        inner: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_stage(self, stage: Stage) -> Self {
        Error::Pipeline {
            stage,
            inner: Box::new(self),
        }
    }

    /// Strips pipeline-stage wrappers and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Pipeline { inner, .. } => inner.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
