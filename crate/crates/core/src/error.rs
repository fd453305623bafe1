use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index must be a positive integer, got 0")]
    ZeroIndex,

    #[error("{0} is even; an odd index is required")]
    EvenIndex(u64),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid digit {digit} in {context}")]
    InvalidDigit { digit: u8, context: &'static str },

    #[error("empty run profile")]
    EmptyRuns,

    #[error("run lengths must be positive")]
    ZeroRun,

    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid range {lo}..={hi}")]
    InvalidRange { lo: u64, hi: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
