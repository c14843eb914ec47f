use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad user input: arguments, config files, column names, ids.
    #[error("input error: {0}")]
    Input(String),

    #[error("malformed record at line {line}: {message}")]
    MalformedLine { line: u64, message: String },

    #[error("authentication rejected by the service (HTTP {status})")]
    Auth { status: u16 },

    #[error("rate limited: gave up after {attempts} attempts")]
    RateLimited { attempts: u32 },

    #[error("transport error: {0}")]
    Transport(String),

    #[error("fetch of {url} failed with HTTP {status}")]
    Fetch { url: String, status: u16 },

    #[error("could not parse page {url}: {message}")]
    Parse { url: String, message: String },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for input-side failures, 2 for the network side.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Auth { .. }
            | Error::RateLimited { .. }
            | Error::Transport(_)
            | Error::Fetch { .. }
            | Error::Parse { .. } => 2,
            Error::Input(_) | Error::MalformedLine { .. } | Error::File { .. } | Error::Io(_) => 1,
        }
    }
}
