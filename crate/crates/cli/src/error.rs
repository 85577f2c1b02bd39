use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{location}: parse error: {msg}")]
    Parse { location: String, msg: String },

    #[error("{location}: validation error: {msg}")]
    Validation { location: String, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] simlab_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn parse(location: impl Into<String>, msg: impl ToString) -> Self {
        CliError::Parse {
            location: location.into(),
            msg: msg.to_string(),
        }
    }

    pub fn invalid(location: impl Into<String>, msg: impl ToString) -> Self {
        CliError::Validation {
            location: location.into(),
            msg: msg.to_string(),
        }
    }

    /// Exit code: 2 when a budget ran out, 3 for anything wrong with the input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_exhaustion() => 2,
            _ => 3,
        }
    }
}
