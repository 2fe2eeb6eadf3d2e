use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bad input: invalid parameters, off-curve points, unmet preconditions.
    #[error("validation error: {0}")]
    Validation(String),

    /// A computation produced something the torsion-freeness theorem rules
    /// out, e.g. a rational point with `y = 0` on a Holm-derived curve.
    #[error("contradiction with the torsion-freeness theorem: {0}")]
    Contradiction(String),

    /// An internal identity failed to hold (inexact ring division, a
    /// non-integral value that must be integral, two routes disagreeing).
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// Trial division hit its configured ceiling before finishing.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// `psi_n(P) = 0`, so `nP` cannot be formed as a quotient of division
    /// polynomial values.
    #[error("x-coordinate of an {n}-torsion point: psi_{n} vanishes at {x}")]
    TorsionDenominator { n: u64, x: String },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn contradiction(msg: impl Into<String>) -> Self {
        Error::Contradiction(msg.into())
    }
}
