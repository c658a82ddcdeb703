use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: lower endpoint exceeds upper endpoint")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("non-finite interval endpoint in [{lo}, {hi}]")]
    NonFinite { lo: f64, hi: f64 },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("empty {0}: at least one row and one column are required")]
    EmptyDimension(&'static str),

    #[error("right-hand side shift {shift} would invert an interval (smallest radius {min_rad})")]
    ShiftTooNegative { shift: f64, min_rad: f64 },

    #[error("contraction amount {amount} outside [0, {min_rad}]")]
    ContractionOutOfRange { amount: f64, min_rad: f64 },

    #[error("{n} unknowns exceed the orthant enumeration limit of {limit}")]
    TooManyUnknowns { n: usize, limit: usize },

    #[error("operation requires exactly {expected} unknowns, system has {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("simplex iteration limit of {0} exceeded")]
    IterationLimit(usize),

    #[error("tolerable solution set is empty (max Tol = {max_tol})")]
    EmptySolutionSet { max_tol: f64 },

    #[error("tolerable solution set is unbounded (dependent point columns {columns:?})")]
    UnboundedSolutionSet { columns: Vec<usize> },

    #[error("right-hand side is the zero point vector; variability is undefined")]
    ZeroRightHandSide,

    #[error("{}", match .line { Some(l) => format!("line {l}: {}", .message), None => .message.clone() })]
    Parse { line: Option<usize>, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line frontend: 1 for bad data,
    /// 2 for well-formed requests that cannot be satisfied.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmptySolutionSet { .. }
            | Error::UnboundedSolutionSet { .. }
            | Error::TooManyUnknowns { .. }
            | Error::WrongDimension { .. }
            | Error::IterationLimit(_) => 2,
            _ => 1,
        }
    }
}
