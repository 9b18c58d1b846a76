use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Operands that do not belong together: different alphabets, scalar
    /// kinds or modes, or an invalid value.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("monomial of length {length} exceeds the table degree bound {bound}")]
    OutOfRange { length: usize, bound: usize },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
