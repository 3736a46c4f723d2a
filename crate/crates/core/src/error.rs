use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter set that cannot describe a valid fan, plan, or model.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown panel id {0}")]
    UnknownPanel(usize),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The Doppler factor `1 - M_r` reached zero or went negative.
    #[error(
        "panel {panel} is supersonic toward the observer at t = {time:e} s (1 - M_r = {doppler:e})"
    )]
    Supersonic {
        panel: usize,
        time: f64,
        doppler: f64,
    },

    #[error("observer at ({:.4}, {:.4}, {:.4}) m lies inside the source region", .0[0], .0[1], .0[2])]
    ObserverInsideSource([f64; 3]),

    #[error("arrival windows of the panels do not overlap long enough: {0}")]
    InsufficientOverlap(String),

    #[error("emission time for observer time {time:e} s lies outside the sampled trajectory")]
    RootOutsideTrajectory { time: f64 },

    #[error("signal too short: {0}")]
    SignalTooShort(String),
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
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

    /// True for failures caused by reading or decoding files.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Parse { .. })
    }
}
