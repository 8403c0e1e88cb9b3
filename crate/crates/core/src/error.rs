use thiserror::Error;

/// Errors raised by the polynomial, norm and bound routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("zero polynomial has no {0}")]
    EmptyPolynomial(&'static str),

    #[error("integer index overflow while unlifting monomial")]
    IndexOverflow,

    #[error("term cap exceeded: {needed} terms required, cap is {cap}")]
    TermCap { needed: u128, cap: usize },

    #[error("polynomial format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
