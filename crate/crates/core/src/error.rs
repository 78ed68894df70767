//! Error type shared across the crate.

use std::fmt;

/// Errors produced by instance construction, solvers, and the verification suite.
#[derive(Debug)]
pub enum Error {
    /// A solution references an element id outside `[0, n)`.
    MalformedSolution { id: usize, n: usize },
    /// Filtering left no element that fits the budget.
    EmptyInstance,
    /// An element cost must be strictly positive.
    NonPositiveCost { id: usize, cost: f64 },
    /// The budget must be strictly positive.
    NonPositiveBudget { budget: f64 },
    /// A caller-supplied parameter is out of range or inconsistent.
    InvalidParameter(String),
    /// An oracle returned a marginal gain below the monotonicity tolerance.
    NonMonotoneOracle { element: usize, marginal: f64 },
    /// A numeric argument fell outside the function's domain.
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// A search node has negative residual budget.
    InfeasibleNode { residual: f64 },
    /// Exhaustive enumeration refused: the ground set exceeds the hard cap.
    GroundSetTooLarge { n: usize, cap: usize },
    /// An operation that requires unit costs was given a general instance.
    NonUnitCosts { id: usize, cost: f64 },
    /// Root bracketing failed: both endpoints have the same sign.
    Bracketing { lo: f64, hi: f64 },
    /// A runtime-checked inequality was violated (an implementation bug).
    InequalityViolated {
        name: &'static str,
        slack: f64,
        context: String,
    },
    /// I/O failure while reading or writing instance files.
    Io(std::io::Error),
    /// A text instance file failed to parse.
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedSolution { id, n } => {
                write!(f, "malformed solution: element id {id} outside [0, {n})")
            }
            Error::EmptyInstance => write!(f, "instance has no element that fits the budget"),
            Error::NonPositiveCost { id, cost } => {
                write!(f, "element {id} has non-positive cost {cost}")
            }
            Error::NonPositiveBudget { budget } => write!(f, "non-positive budget {budget}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NonMonotoneOracle { element, marginal } => write!(
                f,
                "oracle is not monotone: marginal of element {element} is {marginal}"
            ),
            Error::Domain {
                what,
                value,
                lo,
                hi,
            } => write!(f, "{what} = {value} outside domain [{lo}, {hi}]"),
            Error::InfeasibleNode { residual } => {
                write!(f, "infeasible search node: residual budget {residual}")
            }
            Error::GroundSetTooLarge { n, cap } => {
                write!(f, "ground set of size {n} exceeds enumeration cap {cap}")
            }
            Error::NonUnitCosts { id, cost } => write!(
                f,
                "operation requires unit costs but element {id} has cost {cost}"
            ),
            Error::Bracketing { lo, hi } => {
                write!(f, "no sign change on bracket [{lo}, {hi}]")
            }
            Error::InequalityViolated {
                name,
                slack,
                context,
            } => write!(
                f,
                "inequality `{name}` violated with slack {slack:.3e} on instance: {context}"
            ),
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::Parse {
                path,
                line,
                message,
            } => write!(f, "parse error at {path}:{line}: {message}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
