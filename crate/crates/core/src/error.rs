use alloc::string::String;
use core::fmt;

/// Errors reported by the estimators, checkers and fixtures.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A configuration value violates its invariants.
    Config(String),
    /// An operation was called outside its precondition.
    Precondition(String),
    /// A contract between arguments does not hold (dimensions, metadata).
    Contract(String),
    /// A limit estimate could not be produced from the sampled data.
    Estimation(String),
    /// Unknown catalogue name.
    Lookup(String),
    /// The discrete minimizer search of the mean value inequality failed.
    Search(String),
    /// Segment reconstruction failed.
    Reconstruction(String),
    /// `+inf + -inf` or an equivalent undefined extended-real operation.
    Undefined,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Precondition(m) => write!(f, "precondition violated: {m}"),
            Error::Contract(m) => write!(f, "contract error: {m}"),
            Error::Estimation(m) => write!(f, "estimation error: {m}"),
            Error::Lookup(m) => write!(f, "unknown catalogue entry `{m}`"),
            Error::Search(m) => write!(f, "search error: {m}"),
            Error::Reconstruction(m) => write!(f, "reconstruction error: {m}"),
            Error::Undefined => f.write_str("undefined extended-real operation (+inf + -inf)"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
