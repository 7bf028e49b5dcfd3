use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A flag value failed validation.
    #[error("{flag}: {message}")]
    Invalid { flag: String, message: String },

    #[error(transparent)]
    Core(#[from] coorbital_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn invalid(flag: &str, message: impl Into<String>) -> Self {
        CliError::Invalid {
            flag: flag.to_string(),
            message: message.into(),
        }
    }

    /// 0 is success; 1 invalid input; 2 numerical non-convergence.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}
