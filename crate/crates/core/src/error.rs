use thiserror::Error;

/// Errors raised by evaluation, continuation and pole analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("point is not in the convergence region U_r (margin {margin})")]
    NotInConvergenceRegion { margin: f64 },

    #[error("tolerance {tol:e} needs {needed} terms, above the cap of {cap}")]
    TolTooTight { tol: f64, needed: u64, cap: u64 },

    #[error("point lies within {distance:e} of the polar hyperplane s_1+...+s_{index} = {level}")]
    NearPole { index: usize, level: i64, distance: f64 },

    #[error("truncated tail not certified: achieved bound {achieved:e}, requested {requested:e}")]
    TailNotCertified { achieved: f64, requested: f64 },

    #[error("operator coefficient has a pole at t = {t}")]
    PoleInCoefficient { t: String },

    #[error("f(1) = 1 is not allowed here")]
    DegenerateCharacter,

    #[error("hyperplane s_1+...+s_{index} = {level} is not a polar hyperplane of this tuple")]
    NotAPole { index: usize, level: i64 },

    #[error("sign-change bracket for a zero of A_{n} could not be isolated")]
    BracketFailure { n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable identifier used on diagnostic streams.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidCharacter(_) => "InvalidCharacter",
            Error::NotInConvergenceRegion { .. } => "NotInConvergenceRegion",
            Error::TolTooTight { .. } => "TolTooTight",
            Error::NearPole { .. } => "NearPole",
            Error::TailNotCertified { .. } => "TailNotCertified",
            Error::PoleInCoefficient { .. } => "PoleInCoefficient",
            Error::DegenerateCharacter => "DegenerateCharacter",
            Error::NotAPole { .. } => "NotAPole",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
