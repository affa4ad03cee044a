use serde::Serialize;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags, configuration or parameters supplied by the caller.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Internal(#[from] anyhow::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }

    /// A write to a closed stdout, as when output is piped into `head`.
    pub fn is_broken_pipe(&self) -> bool {
        match self {
            CliError::Internal(e) => e.chain().any(|c| {
                c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            }),
            CliError::Usage(_) => false,
        }
    }

    /// The `{code, message}` object written to stderr.
    pub fn to_json(&self) -> String {
        error_json(self.exit_code(), &format!("{self:#}"))
    }
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    code: i32,
    message: &'a str,
}

pub fn error_json(code: i32, message: &str) -> String {
    serde_json::to_string(&ErrorObject { code, message }).expect("string fields always serialize")
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Wraps any library error as an internal failure.
pub(crate) fn internal<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Internal(e.into())
}
