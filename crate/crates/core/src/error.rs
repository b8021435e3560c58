use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("x = {x} lies outside the domain [{}, {}]", domain[0], domain[1])]
    Domain {
        x: Rational,
        domain: Box<[Rational; 2]>,
    },

    #[error("lap decomposition would need {needed} pieces, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },

    /// Some iterate is exactly the identity on a nondegenerate interval, so its
    /// fixed-point set is a continuum.
    #[error("iterate is the identity on [{}, {}]", segment[0], segment[1])]
    IdentitySegment { segment: Box<[Rational; 2]> },

    #[error("{x} is not fixed by iterate {n}")]
    NotPeriodic { x: Rational, n: u64 },

    #[error("no orbit of least period {period}")]
    NoSuchOrbit { period: u64 },

    #[error("malformed orbit: {0}")]
    MalformedOrbit(String),

    #[error("walk {walk:?} is not a closed walk in the cover graph")]
    NotACycle { walk: Vec<usize> },

    #[error("interval {from} does not cover interval {to} under the actual map")]
    CoverageFailure { from: usize, to: usize },

    #[error("witness not found: {0}")]
    WitnessNotFound(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("{0} is not a fixed point")]
    NotFixed(Rational),

    #[error("surgery is discontinuous at {endpoint}")]
    ContinuityError { endpoint: Rational },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
}

impl Error {
    /// Process exit status for this error class: 3 for budget exhaustion,
    /// 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            _ => 2,
        }
    }
}
