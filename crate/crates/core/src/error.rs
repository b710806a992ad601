use core::fmt;

/// Errors produced by model constructors and operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter failed its validity constraint.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// An input angle or value was NaN/infinite where a finite value is required.
    NonFinite(&'static str),
    /// Requested RF chain count is outside `1..=n_antennas`.
    ChainCountOutOfRange { requested: usize, available: usize },
    /// The MAP correction denominator vanished (`noise_std = 0` together with
    /// a zero derivative projection); the estimate is undefined.
    DegenerateDenominator,
    /// Mean acquisition time is undefined because the outage probability is 1.
    NeverAcquires,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::NonFinite(what) => write!(f, "non-finite input: {what}"),
            Error::ChainCountOutOfRange {
                requested,
                available,
            } => write!(
                f,
                "chain count {requested} outside valid range 1..={available}"
            ),
            Error::DegenerateDenominator => {
                write!(
                    f,
                    "degenerate MAP denominator (zero noise and zero derivative)"
                )
            }
            Error::NeverAcquires => write!(f, "outage probability is 1; link never acquires"),
        }
    }
}

impl core::error::Error for Error {}
