//! Exact classification of `tan²`, `tan`, `cos²` and `cos` at rational
//! multiples of π, with independently checkable irrationality certificates.
//!
//! The rational cases are few: `tan²(rπ) ∈ {0, 1, 1/3, 3}`, `tan(rπ) ∈ {-1, 0, 1}`,
//! `cos²(rπ) ∈ {0, 1/4, 1/2, 3/4, 1}` and `cos(rπ) ∈ {0, ±1/2, ±1}`. Everything
//! else is irrational, and [`certifier::certify`] produces a step-by-step
//! argument for it that [`certifier::verify_certificate`] re-checks from scratch.

pub mod angle;
pub mod certifier;
pub mod classifier;
pub mod error;
pub mod exact;
pub mod highprec;
pub mod polynomial;

pub use angle::{DoublingChain, ReducedAngle, Sign};
pub use certifier::{certify, verify_certificate, CertStep, Certificate, CertifyOptions};
pub use classifier::{TrigFunction, TrigVerdict};
pub use error::{Error, Result};
pub use exact::{ExactInteger, ExactRational};
pub use highprec::RatInterval;
pub use polynomial::IntPolynomial;
