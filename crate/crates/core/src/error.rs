use std::io;

/// Errors produced by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("pattern must contain at least one symbol")]
    EmptyPattern,

    #[error("threshold {threshold} must be lower than the pattern length {len}")]
    Threshold { threshold: usize, len: usize },

    #[error("symbol {0:?} is not part of the alphabet")]
    UnknownToken(char),

    #[error("symbol code {0} is outside the alphabet")]
    UnknownCode(u16),

    #[error("reserved token {0:?} cannot be declared in an alphabet")]
    ReservedToken(String),

    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("symbol code {0} is reserved for padding")]
    ReservedSymbol(u16),

    #[error("window must contain at least one symbol")]
    EmptyWindow,

    #[error("{0}")]
    Domain(String),

    #[error("engine already finalized")]
    Finalized,

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit code for this error: 2 for broken internal invariants,
    /// 1 for everything caused by inputs or the environment.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
