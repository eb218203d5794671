use thiserror::Error;

/// Every failure the engine can report. The CLI maps each variant onto an exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("property violation: {0}")]
    Property(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Construction(_) | Error::Parse(_) => 2,
            Error::Capacity(_) => 3,
            Error::Property(_) => 4,
            Error::Io(_) | Error::Json(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! capacity {
    ($($arg:tt)*) => { $crate::error::Error::Capacity(format!($($arg)*)) };
}
pub(crate) use capacity;
pub(crate) use domain;
