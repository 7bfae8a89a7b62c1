use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A Gamma-family function was evaluated at one of its poles.
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },

    /// lim Γ(1+r+ε)/Γ(1+r+ε−σ) does not exist: the numerator has a pole
    /// that the denominator does not cancel.
    #[error("Gamma-ratio limit diverges for r = {r}, sigma = {sigma}")]
    DivergentLimit { r: f64, sigma: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature tolerance not met: estimated error {achieved:e} exceeds requested {requested:e}")]
    ToleranceNotMet { achieved: f64, requested: f64 },

    #[error("finite-difference step cannot reach tolerance: best error estimate {achieved:e} exceeds {requested:e}")]
    StepUnderflow { achieved: f64, requested: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        match err.into_kind() {
            csv::ErrorKind::Io(e) => Error::Io(e),
            other => Error::Io(io::Error::other(format!("{other:?}"))),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
