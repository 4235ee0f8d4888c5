use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid probability distribution: {0}")]
    Distribution(String),

    #[error("expected cost {expected} exceeds cap {gamma}")]
    CostViolation { expected: f64, gamma: f64 },

    #[error("member {member} puts mass on letter {letter} where the reference has none")]
    AbsoluteContinuity { member: usize, letter: usize },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("parameters not degraded: {0}")]
    NotDegraded(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("enumeration too large: {0}")]
    Infeasible(String),

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: format!("[{lo}, {hi}]"),
        })
    }
}
