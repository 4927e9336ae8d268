//! Error type shared by every module in the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// Contract violations that a caller can always avoid (e.g. `zeros(0)`)
/// panic instead; `Error` is reserved for data-dependent failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A terminal symbol outside {0,1}.
    InvalidSymbol(u8),
    /// An expansion length would not fit in 64 bits.
    LengthOverflow,
    /// A materialization would exceed the caller-supplied budget.
    BudgetExceeded { needed: u64, budget: u64 },
    /// A set element lies outside {1..U} (or {-U..U} for signed instances).
    ElementOutOfUniverse { element: i64, universe: i64 },
    /// Vector/matrix dimensions do not agree.
    DimensionMismatch { left: u64, right: u64 },
    /// A sum instance violates a generator's precondition.
    InvalidInstance(String),
    /// Instances passed to the matrix-vector generator disagree on the target.
    MixedTargets,
    /// An instance is not in the form (signed/positive) the operation expects.
    InvalidForm(String),
    /// A text format could not be parsed.
    Parse(String),
    /// Underlying I/O failure (CLI paths).
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSymbol(b) => write!(f, "invalid symbol {b}: alphabet is {{0,1}}"),
            Error::LengthOverflow => write!(f, "expansion length overflows 64 bits"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "budget exceeded: need {needed}, budget {budget}")
            }
            Error::ElementOutOfUniverse { element, universe } => {
                write!(f, "element {element} outside universe bound {universe}")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::InvalidInstance(msg) => write!(f, "invalid instance: {msg}"),
            Error::MixedTargets => write!(f, "instances do not share a common target"),
            Error::InvalidForm(msg) => write!(f, "invalid form: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code for the CLI: 2 invalid input, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            _ => 2,
        }
    }
}
