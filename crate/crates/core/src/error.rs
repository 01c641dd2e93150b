//! Crate-wide error type.
//!
//! Errors are split into two classes so that callers (notably the CLI) can
//! map them onto distinct exit codes: [`Error::is_config`] marks mistakes in
//! user-supplied inputs, everything else is a runtime failure.

use std::fmt;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An interval endpoint or center left the unit segment, or lo > hi.
    InvalidInterval { lo: f64, hi: f64 },
    /// A constructor argument failed validation (message explains which).
    InvalidArgument(String),
    /// A user-supplied configuration value failed validation.
    InvalidConfig(String),
    /// Transmitter placement could not satisfy the separation constraint.
    InfeasibleSeparation { count: usize, min_separation: f64 },
    /// The density optimizer was asked for `n = 1`, where the objective is
    /// flat: any continuous positive density is optimal.
    DegenerateSingleSensor,
    /// The normalization integral was not monotone in the multiplier, so
    /// bisection would be unsound.
    BracketNotMonotone,
    /// The model integrand left `[0, 1]`: `2 r_s f_lambda(x) > 1` somewhere.
    IntegrandOutOfRange { x: f64, value: f64 },
    /// Filesystem or serialization failure, carrying the underlying message.
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by user-supplied configuration rather than by
    /// the computation itself. The CLI maps these to exit code 2.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidInterval { .. }
                | Error::InvalidArgument(_)
                | Error::InvalidConfig(_)
                | Error::InfeasibleSeparation { .. }
                | Error::DegenerateSingleSensor
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInterval { lo, hi } => {
                write!(f, "invalid interval [{lo}, {hi}]: need 0 <= lo <= hi <= 1")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            Error::InfeasibleSeparation { count, min_separation } => write!(
                f,
                "cannot place {count} transmitters with pairwise separation {min_separation} in [0, 1]"
            ),
            Error::DegenerateSingleSensor => write!(
                f,
                "degenerate problem: with a single sensor every continuous positive density is optimal"
            ),
            Error::BracketNotMonotone => {
                write!(f, "normalization integral is not monotone in the multiplier; cannot bisect")
            }
            Error::IntegrandOutOfRange { x, value } => write!(
                f,
                "detection probability 2*r_s*f_lambda({x}) = {value} exceeds 1; model integrand out of range"
            ),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
