use thiserror::Error;

/// Errors raised by the engine.
///
/// The split between input and resource errors is relied on by the CLI to
/// choose an exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A value did not satisfy a precondition (wrong space, bad parameter).
    #[error("invalid input: {0}")]
    Input(String),

    /// A materialization would exceed a configured cap.
    #[error("{what} needs {requested} elements, above the cap of {cap}")]
    Resource {
        what: &'static str,
        requested: u128,
        cap: usize,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
