use std::fmt;

/// Failure of a CLI run, mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    Core(mindist::Error),
    Usage(String),
    Version { found: String, expected: String },
    Io(std::io::Error),
    Json(serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mindist::Error::Budget { .. }) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Version { .. } => 4,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Usage(m) => f.write_str(m),
            CliError::Version { found, expected } => {
                write!(f, "manifest was written by version {found}, this is {expected}")
            }
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Json(e) => write!(f, "malformed manifest: {e}"),
        }
    }
}

impl From<mindist::Error> for CliError {
    fn from(e: mindist::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
