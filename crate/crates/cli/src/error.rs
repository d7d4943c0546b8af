use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] vortexpack::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
}

#[derive(Serialize)]
struct Report<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn config(message: impl std::fmt::Display) -> Self {
        CliError::Config(message.to_string())
    }

    /// 2 for anything wrong with the request, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Compute(_) => "computation",
            CliError::Io(_) => "io",
            CliError::VerificationFailed { .. } => "verification",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Report {
            error: self.kind(),
            message: self.to_string(),
        })
        .expect("error report serializes")
    }
}
