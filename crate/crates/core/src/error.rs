use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A result or intermediate value left the 64-bit range.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    /// An argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation at a pole of a fractional-linear map.
    #[error("{0} has a pole at {1}")]
    Pole(&'static str, &'static str),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
