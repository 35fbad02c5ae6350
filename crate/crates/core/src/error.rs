use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The rotation system is not a valid combinatorial map.
    #[error("malformed map: {0}")]
    Structure(String),
    /// An embedding operation was asked to do something the topology forbids.
    #[error("topology error: {0}")]
    Topology(String),
    #[error("invalid input: {0}")]
    Input(String),
    /// A machine-checked certificate did not hold.
    #[error("certificate failure: {0}")]
    Certificate(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! cert_fail {
    ($($arg:tt)*) => {
        return Err($crate::error::Error::Certificate(format!($($arg)*)))
    };
}
pub(crate) use cert_fail;
