//! Independent re-checking of certificates.
//!
//! Nothing here consults the classifier: reductions, chains, polynomials,
//! divisor lists, evaluations, enclosures and square tests are all recomputed
//! from the certificate's input.

use std::sync::OnceLock;

use num_traits::ToPrimitive;
use thiserror::Error;

use super::{
    exact_sqrt, known_tan_squared, scaled_quadratic, BaseValue, CertStep, Certificate,
    ExclusionMethod, Relation, CERTIFICATE_VERSION,
};
use crate::angle::{double_for_tan, reduce_for_cos, reduce_for_tan};
use crate::classifier::{TrigFunction, TrigVerdict};
use crate::exact::{divisors, is_perfect_square, ExactRational};
use crate::highprec::{eval_tan_squared, MAX_BITS};
use crate::polynomial::{cached_q, QValueCache};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unsupported certificate version {0}")]
    UnsupportedVersion(u32),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("reduction mismatch: {0}")]
    Reduction(String),
    #[error("chain mismatch: {0}")]
    Chain(String),
    #[error("polynomial mismatch: {0}")]
    Polynomial(String),
    #[error("candidate mismatch: {0}")]
    Candidates(String),
    #[error("exact evaluation mismatch: {0}")]
    Evaluation(String),
    #[error("separation check failed: {0}")]
    Separation(String),
    #[error("quadratic mismatch: {0}")]
    Quadratic(String),
    #[error("square test mismatch: {0}")]
    SquareTest(String),
    #[error("verdict not entailed: {0}")]
    VerdictNotEntailed(String),
}

type Check<T = ()> = Result<T, VerifyError>;

/// What the `tan²` part of a certificate establishes.
#[derive(Debug, Clone, PartialEq, Eq)]
enum TanSquaredFact {
    Pole,
    Exact(ExactRational),
    Irrational,
}

pub(crate) fn cos_is_negative(r: &ExactRational) -> bool {
    reduce_for_cos(r).value() > &ExactRational::frac(1, 2)
}

fn expect(cond: bool, err: impl FnOnce() -> VerifyError) -> Check {
    if cond {
        Ok(())
    } else {
        Err(err())
    }
}

fn malformed(msg: impl Into<String>) -> VerifyError {
    VerifyError::Malformed(msg.into())
}

/// Re-derives every step of `cert` and checks that its verdict follows.
pub fn verify_certificate(cert: &Certificate) -> Check {
    if cert.version != CERTIFICATE_VERSION {
        return Err(VerifyError::UnsupportedVersion(cert.version));
    }
    let prefix: &[Relation] = match cert.function {
        TrigFunction::TanSquared => &[],
        TrigFunction::Tan => &[Relation::TanSquaredIsSquare],
        TrigFunction::CosSquared => &[Relation::CosSquaredFromTanSquared],
        TrigFunction::Cos => &[Relation::CosSquaredIsSquare, Relation::CosSquaredFromTanSquared],
    };
    let mut steps = cert.steps.as_slice();
    for expected in prefix {
        match steps.split_first() {
            Some((CertStep::IdentityStep { relation }, rest)) if relation == expected => steps = rest,
            _ => return Err(malformed(format!("missing identity step {expected:?}"))),
        }
    }
    let sqrt_suffix = match steps.split_last() {
        Some((CertStep::SqrtStep { radicand, square_test_result }, rest)) => {
            steps = rest;
            Some((radicand, square_test_result))
        }
        _ => None,
    };

    let fact = verify_tan_squared(&cert.input, steps)?;
    let derived = derive_verdict(cert, &fact, sqrt_suffix)?;
    expect(derived == cert.verdict, || {
        VerifyError::VerdictNotEntailed(format!(
            "steps establish {derived} but the certificate claims {}",
            cert.verdict
        ))
    })
}

fn derive_verdict(
    cert: &Certificate,
    fact: &TanSquaredFact,
    sqrt_suffix: Option<(&ExactRational, &Option<ExactRational>)>,
) -> Check<TrigVerdict> {
    let cos_squared = match fact {
        TanSquaredFact::Pole => TrigVerdict::Exact(ExactRational::zero()),
        TanSquaredFact::Exact(t) => TrigVerdict::Exact(
            (ExactRational::one() + t)
                .recip()
                .ok_or_else(|| malformed("1 + tan² vanished"))?,
        ),
        TanSquaredFact::Irrational => TrigVerdict::Irrational,
    };
    let (needs_sqrt_of, negative) = match (cert.function, fact) {
        (TrigFunction::Tan, TanSquaredFact::Exact(t)) => (
            Some(t.clone()),
            reduce_for_tan(&cert.input).sign() == crate::angle::Sign::Negative,
        ),
        (TrigFunction::Cos, _) => (cos_squared.exact_value().cloned(), cos_is_negative(&cert.input)),
        _ => (None, false),
    };
    match (&needs_sqrt_of, sqrt_suffix) {
        (None, Some(_)) => return Err(malformed("unexpected square-root step")),
        (Some(_), None) => return Err(malformed("missing square-root step")),
        _ => {}
    }
    if let (Some(radicand), Some((recorded_radicand, recorded_root))) = (&needs_sqrt_of, sqrt_suffix) {
        expect(radicand == recorded_radicand, || {
            VerifyError::SquareTest(format!("radicand {recorded_radicand}, expected {radicand}"))
        })?;
        let root = is_perfect_square(radicand);
        expect(&root == recorded_root, || {
            VerifyError::SquareTest(format!("square test of {radicand} recorded as {recorded_root:?}"))
        })?;
        return Ok(match root {
            Some(root) if negative => TrigVerdict::Exact(-root),
            Some(root) => TrigVerdict::Exact(root),
            None => TrigVerdict::Irrational,
        });
    }
    Ok(match cert.function {
        TrigFunction::TanSquared | TrigFunction::Tan => match fact {
            TanSquaredFact::Pole => TrigVerdict::Pole,
            TanSquaredFact::Exact(t) => TrigVerdict::Exact(t.clone()),
            TanSquaredFact::Irrational => TrigVerdict::Irrational,
        },
        TrigFunction::CosSquared | TrigFunction::Cos => cos_squared,
    })
}

fn verify_tan_squared(input: &ExactRational, steps: &[CertStep]) -> Check<TanSquaredFact> {
    let start = reduce_for_tan(input);
    match steps {
        [CertStep::Base { angle, value }] => {
            expect(angle == start.value(), || {
                VerifyError::Reduction(format!("{input} reduces to {}, not {angle}", start.value()))
            })?;
            let known = known_tan_squared(start.n()).ok_or_else(|| {
                VerifyError::VerdictNotEntailed(format!("{angle} is not a base angle"))
            })?;
            expect(&known == value, || {
                VerifyError::VerdictNotEntailed(format!("tan² at {angle} is {known}, not {value}"))
            })?;
            Ok(match known {
                BaseValue::Pole => TanSquaredFact::Pole,
                BaseValue::Value(v) => TanSquaredFact::Exact(v),
            })
        }
        [CertStep::Chain { angles }, last_step] => {
            let first = angles.first().ok_or_else(|| malformed("empty chain"))?;
            expect(first == start.value(), || {
                VerifyError::Reduction(format!("{input} reduces to {}, not {first}", start.value()))
            })?;
            expect(known_tan_squared(start.n()).is_none(), || {
                VerifyError::VerdictNotEntailed(format!("{first} has a known rational tan²"))
            })?;
            let mut current = start.clone();
            for next in &angles[1..] {
                current = double_for_tan(&current);
                expect(current.value() == next, || {
                    VerifyError::Chain(format!("doubling gives {}, recorded {next}", current.value()))
                })?;
            }
            for a in angles {
                let den = a.denom().to_u64();
                expect(!matches!(den, Some(2) | Some(4)), || {
                    VerifyError::Chain(format!("{a} sits at the double-angle pole"))
                })?;
            }
            match last_step {
                CertStep::Poly { .. } => verify_poly(&current, last_step)?,
                CertStep::BackwardQuadratic { .. } => verify_backward(&current, last_step)?,
                _ => return Err(malformed("chain must be followed by poly or backward_quadratic")),
            }
            Ok(TanSquaredFact::Irrational)
        }
        _ => Err(malformed("unrecognised tan² step layout")),
    }
}

fn verify_poly(end: &crate::angle::ReducedAngle, step: &CertStep) -> Check {
    let CertStep::Poly { q, coeffs, candidates, exclusions } = step else {
        unreachable!()
    };
    expect(end.n() == q, || VerifyError::Chain(format!("chain ends at denominator {}, poly uses {q}", end.n())))?;
    let q_small = q
        .to_u64()
        .filter(|&v| v >= 5 && v % 2 == 1)
        .ok_or_else(|| VerifyError::Polynomial(format!("q = {q} is not an odd integer >= 5")))?;
    let expected = cached_q(q_small).map_err(|e| VerifyError::Polynomial(e.to_string()))?;
    expect(&expected == coeffs, || VerifyError::Polynomial(format!("coefficients differ from Q_{q}")))?;
    let expected_candidates = divisors(q).map_err(|e| VerifyError::Candidates(e.to_string()))?;
    expect(&expected_candidates == candidates, || {
        VerifyError::Candidates(format!("divisors of {q} are {expected_candidates:?}"))
    })?;
    expect(exclusions.len() == candidates.len(), || {
        VerifyError::Candidates(format!("{} candidates but {} exclusions", candidates.len(), exclusions.len()))
    })?;
    static VALUES: OnceLock<QValueCache> = OnceLock::new();
    let s_angle = double_for_tan(end);
    for (candidate, exclusion) in candidates.iter().zip(exclusions) {
        let candidate = ExactRational::from_integer(candidate.clone());
        expect(exclusion.candidate == candidate, || {
            VerifyError::Candidates(format!("exclusion for {} recorded against {candidate}", exclusion.candidate))
        })?;
        match &exclusion.method {
            ExclusionMethod::Nonroot { q_value } => {
                let actual = VALUES
                    .get_or_init(Default::default)
                    .eval(q_small, candidate.numer())
                    .map(ExactRational::from_integer)
                    .map_err(|e| VerifyError::Evaluation(e.to_string()))?;
                expect(&actual == q_value, || {
                    VerifyError::Evaluation(format!("Q_{q}({candidate}) = {actual}, recorded {q_value}"))
                })?;
                expect(!actual.is_zero(), || {
                    VerifyError::Evaluation(format!("{candidate} is a root of Q_{q}"))
                })?;
            }
            ExclusionMethod::Separation { interval_lo, interval_hi, bits } => {
                expect((8..=MAX_BITS).contains(bits), || {
                    VerifyError::Separation(format!("{bits} bits outside [8, {MAX_BITS}]"))
                })?;
                let interval = eval_tan_squared(&s_angle, *bits)
                    .map_err(|e| VerifyError::Separation(e.to_string()))?;
                expect(interval.lo() == interval_lo && interval.hi() == interval_hi, || {
                    VerifyError::Separation(format!("recomputed enclosure at {bits} bits is {interval:?}"))
                })?;
                expect(!interval.contains(&candidate), || {
                    VerifyError::Separation(format!("{interval:?} does not exclude {candidate}"))
                })?;
            }
        }
    }
    Ok(())
}

fn verify_backward(end: &crate::angle::ReducedAngle, step: &CertStep) -> Check {
    let CertStep::BackwardQuadratic { den, d_value, quad_coeffs, discriminant, square_witness } = step else {
        unreachable!()
    };
    expect(end.n() == den, || VerifyError::Chain(format!("chain ends at denominator {}, step uses {den}", end.n())))?;
    expect(matches!(den.to_u64(), Some(8) | Some(12)), || {
        VerifyError::Quadratic(format!("denominator {den} is not 8 or 12"))
    })?;
    let doubled = double_for_tan(end);
    let known = known_tan_squared(doubled.n());
    expect(known == Some(BaseValue::Value(d_value.clone())), || {
        VerifyError::Quadratic(format!("tan² at {} is not {d_value}", doubled.value()))
    })?;
    let (expected_coeffs, expected_disc) = scaled_quadratic(d_value);
    expect(&expected_coeffs == quad_coeffs, || {
        VerifyError::Quadratic(format!("quadratic for D = {d_value} is {expected_coeffs:?}"))
    })?;
    expect(&expected_disc == discriminant, || {
        VerifyError::Quadratic(format!("discriminant is {expected_disc}, recorded {discriminant}"))
    })?;
    let witness = exact_sqrt(&expected_disc);
    expect(&witness == square_witness, || {
        VerifyError::SquareTest(format!("square witness for {expected_disc} recorded as {square_witness:?}"))
    })?;
    expect(witness.is_none(), || {
        VerifyError::VerdictNotEntailed(format!("{expected_disc} is a square, so a rational root may exist"))
    })?;
    Ok(())
}
