use thiserror::Error;

use crate::exact::{ExactInteger, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expected a positive integer, got {0}")]
    NotPositive(ExactInteger),
    #[error("{0} is too large for trial division")]
    TooLargeForTrialDivision(ExactInteger),
    #[error("square root of negative value {0}")]
    NegativeRadicand(ExactInteger),
    #[error("binomial coefficient C({n}, {k}) out of range")]
    BinomialRange { n: ExactInteger, k: ExactInteger },
    #[error("polynomial family needs an odd integer n >= 3, got {0}")]
    BadFamilyIndex(ExactInteger),
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("double-angle map has a pole at tan^2 = 1")]
    DoubleAnglePole,
    #[error("expected a nonnegative rational, got {0}")]
    NegativeRational(ExactRational),
    #[error("expected an odd positive integer, got {0}")]
    NotOddPositive(ExactInteger),
    #[error("cannot double from denominator {from} down to {to}")]
    BadChainTarget { from: ExactInteger, to: ExactInteger },
    #[error("tan is undefined at {0}")]
    Pole(ExactRational),
    #[error("precision of {0} bits is below the minimum of 8")]
    PrecisionTooLow(u32),
    #[error("separation of candidate {candidate} needs more than {cap} bits")]
    PrecisionCapExceeded { candidate: ExactRational, cap: u32 },
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
