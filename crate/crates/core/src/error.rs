use thiserror::Error;

/// Errors raised by the library. Each variant maps to one failure class of the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Smallest genus the library accepts for genus-scoped contexts.
pub const MIN_GENUS: usize = 4;

pub fn require_genus(g: usize) -> Result<()> {
    if g < MIN_GENUS {
        return Err(Error::Config(format!(
            "genus must be at least {MIN_GENUS}, got {g}"
        )));
    }
    Ok(())
}

pub(crate) fn same_genus(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::GenusMismatch(a, b));
    }
    Ok(())
}
