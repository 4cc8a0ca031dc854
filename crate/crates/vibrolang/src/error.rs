use std::fmt;

use vibrolang_core::Error as CoreError;

/// Failure of a CLI run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent configuration. Nothing is written.
    Config(String),
    /// A numerical routine refused or failed.
    Numeric(CoreError),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }

    pub fn config(path: &str, msg: impl fmt::Display) -> Self {
        CliError::Config(format!("{path}: {msg}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(e) => write!(f, "numeric error: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attach a config path to a core error. Parameter errors become config errors.
pub fn at(prefix: &str) -> impl Fn(CoreError) -> CliError + '_ {
    move |e| match e {
        CoreError::Parameter { field, reason } => CliError::config(&format!("{prefix}.{field}"), reason),
        CoreError::Variant(m) => CliError::config(prefix, m),
        other => CliError::Numeric(other),
    }
}

/// Numeric errors pass through verbatim.
pub fn numeric(e: CoreError) -> CliError {
    at("parameters")(e)
}
