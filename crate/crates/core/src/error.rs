use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: line {line}: {message}", source_name.as_deref().unwrap_or("<input>"))]
    Parse {
        source_name: Option<String>,
        line: usize,
        message: String,
    },

    #[error("duplicate sample_id `{0}`")]
    DuplicateId(String),

    #[error("insufficient eligible samples for {quota}: need {needed}, have {available} (short by {})", needed - available)]
    Shortfall {
        quota: String,
        needed: usize,
        available: usize,
    },

    #[error("MLAAD language `{0}` is required by the rules but absent from the catalog")]
    MissingLanguage(String),

    #[error("MLAAD language `{language}` needs {needed} distinct systems, catalog has {available}")]
    TooFewSystems {
        language: String,
        needed: usize,
        available: usize,
    },

    #[error("invalid preset: {0}")]
    InvalidPreset(String),

    #[error("unsupported codec: WAVE format tag {0:#06x}")]
    UnsupportedCodec(u16),

    #[error("malformed WAV: {0}")]
    Wav(String),

    #[error("invalid audio: {0}")]
    InvalidAudio(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} undefined: both bonafide and spoof samples are required")]
    SingleClass(&'static str),

    #[error("unknown sample_id `{0}`")]
    UnknownSample(String),

    #[error("zero variance: all embeddings are identical")]
    ZeroVariance,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: None,
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attaches a file name to a parse error so diagnostics read `file: line N: ...`.
    pub fn in_file(self, name: impl Into<String>) -> Self {
        match self {
            Error::Parse { line, message, .. } => Error::Parse {
                source_name: Some(name.into()),
                line,
                message,
            },
            other => other,
        }
    }

    /// True when the error is a violated constraint (the catalog cannot
    /// satisfy a preset) rather than malformed input.
    pub fn is_constraint_violation(&self) -> bool {
        matches!(
            self,
            Error::Shortfall { .. } | Error::MissingLanguage(_) | Error::TooFewSystems { .. }
        )
    }
}
