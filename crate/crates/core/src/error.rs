use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A lattice, grid or exact-arithmetic workload exceeds its configured cap.
    #[error("capacity exceeded: {what} needs {requested} points, cap is {cap}")]
    Capacity {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A point is too close to the simplex boundary for a density that blows up there.
    #[error("singular point: coordinate {index} = {value:e} is below {floor:e}")]
    Singular { index: usize, value: f64, floor: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The instance is degenerate (e.g. the function under test is constant).
    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("empty sample set")]
    EmptySample,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
