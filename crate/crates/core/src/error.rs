//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A table or enumeration request exceeds the configured safe limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Leading sequence value is zero where an inverse is required.
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// An exact intermediate (integer power, lcm, …) does not fit its width.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The requested brute-force enumeration is too large to run.
    #[error("infeasible: {0}")]
    Feasibility(String),

    /// Arc schedule parameters violate `1 < R_j < Q_j` at the given x.
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    /// An operation precondition does not hold for the supplied arguments.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed user input (polynomial strings, parameters, …).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Coefficient cache file does not match the `tau-table v1` format.
    #[error("malformed cache file: {0}")]
    CacheFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
