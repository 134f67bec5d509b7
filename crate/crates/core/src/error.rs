use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map one-to-one onto the exit codes of the `tailsum` binary.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request is well-formed but beyond what this build supports
    /// (derivative order, dimension, grid size).
    #[error("capability error: {0}")]
    Capability(String),
    /// A numerical procedure failed (bracket not found, degenerate
    /// conditioning, non-finite intermediate).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Malformed configuration text.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! capability {
    ($($arg:tt)*) => { $crate::error::Error::Capability(format!($($arg)*)) };
}
macro_rules! numerical {
    ($($arg:tt)*) => { $crate::error::Error::Numerical(format!($($arg)*)) };
}
pub(crate) use {capability, domain, numerical};
