//! Irrationality certificates.
//!
//! Every `tan²` question is settled in one of three ways:
//!
//! * **base** — the reduced denominator is 1, 2, 3, 4 or 6 and the value is a
//!   known identity (or the pole);
//! * **chain + poly** — doubling the angle reaches an odd denominator `q >= 5`.
//!   Then `s = tan²(2d'π/q)` is a positive root of the monic integer
//!   polynomial `Q_q`, so a rational `s` would have to be a divisor of `q`.
//!   Each divisor is excluded, either because it is not a root of `Q_q` or by
//!   a certified numeric enclosure of `s` that misses it;
//! * **chain + backward quadratic** — the odd part is 1 or 3. The chain stops
//!   at denominator 8 or 12, whose double has `tan²` equal to `D = 1` or
//!   `D = 1/3`. Any rational preimage of `D` under `T ↦ 4T/(1-T)²` would be a
//!   rational root of `D·x² - 2(D+2)·x + D`, whose discriminant is not a
//!   rational square.
//!
//! In the last two cases irrationality travels back up the chain because the
//! double-angle map sends rationals to rationals and no chain element sits at
//! its pole.
//!
//! `tan`, `cos²` and `cos` certificates wrap the `tan²` argument with the
//! identities that connect them and, where the `tan²`/`cos²` value is rational,
//! a square-root test.

mod verify;
mod wire;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::angle::{double_for_tan, doubling_chain, odd_part, reduce_for_tan, ReducedAngle};
use crate::classifier::{TrigFunction, TrigVerdict};
use crate::error::{Error, Result};
use crate::exact::{divisors, integer_sqrt, is_perfect_square, ExactInteger, ExactRational};
use crate::highprec::{eval_tan_squared, MAX_BITS};
use crate::polynomial::{cached_q, eval_at_rational, IntPolynomial, QValueCache};

pub use verify::{verify_certificate, VerifyError};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub version: u32,
    pub input: ExactRational,
    pub function: TrigFunction,
    pub verdict: TrigVerdict,
    pub steps: Vec<CertStep>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CertStep {
    /// A known value at denominator 1, 2, 3, 4 or 6.
    Base {
        angle: ExactRational,
        value: BaseValue,
    },
    /// Successive doublings, each folded into `[0, 1/2]`.
    Chain { angles: Vec<ExactRational> },
    /// `Q_q` and the exclusion of every positive divisor of `q` as a value of
    /// `tan²` at the doubled chain end.
    Poly {
        #[serde(with = "wire::integer")]
        q: ExactInteger,
        #[serde(with = "wire::polynomial")]
        coeffs: IntPolynomial,
        #[serde(with = "wire::integers")]
        candidates: Vec<ExactInteger>,
        exclusions: Vec<Exclusion>,
    },
    BackwardQuadratic {
        #[serde(with = "wire::integer")]
        den: ExactInteger,
        #[serde(rename = "D")]
        d_value: ExactRational,
        #[serde(with = "wire::integers")]
        quad_coeffs: Vec<ExactInteger>,
        #[serde(with = "wire::integer")]
        discriminant: ExactInteger,
        #[serde(with = "wire::optional_integer")]
        square_witness: Option<ExactInteger>,
    },
    SqrtStep {
        radicand: ExactRational,
        square_test_result: Option<ExactRational>,
    },
    IdentityStep { relation: Relation },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exclusion {
    pub candidate: ExactRational,
    pub method: ExclusionMethod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExclusionMethod {
    /// `Q_q(candidate)` is this nonzero value.
    Nonroot {
        #[serde(rename = "Q_value")]
        q_value: ExactRational,
    },
    /// A certified enclosure of `s` at `bits` that excludes the candidate.
    Separation {
        interval_lo: ExactRational,
        interval_hi: ExactRational,
        bits: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "cos2 = 1/(1+tan2)")]
    CosSquaredFromTanSquared,
    #[serde(rename = "tan2 = tan^2")]
    TanSquaredIsSquare,
    #[serde(rename = "cos2 = cos^2")]
    CosSquaredIsSquare,
}

/// Value recorded in a base step: the pole or an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseValue {
    Pole,
    Value(ExactRational),
}

impl fmt::Display for BaseValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseValue::Pole => f.write_str("pole"),
            BaseValue::Value(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for BaseValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BaseValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "pole" {
            return Ok(BaseValue::Pole);
        }
        ExactRational::parse_canonical(&text)
            .map(BaseValue::Value)
            .map_err(D::Error::custom)
    }
}

/// `tan²` at the exceptional denominators.
pub(crate) fn known_tan_squared(den: &ExactInteger) -> Option<BaseValue> {
    let value = match den.to_u64()? {
        1 => ExactRational::zero(),
        2 => return Some(BaseValue::Pole),
        3 => ExactRational::from_integer(3),
        4 => ExactRational::one(),
        6 => ExactRational::frac(1, 3),
        _ => return None,
    };
    Some(BaseValue::Value(value))
}

/// Integer form of `D·x² - 2(D+2)·x + D` (ascending coefficients) and its
/// discriminant. With `D = a/b`, scaling by `b` gives `a·x² - 2(a+2b)·x + a`.
pub(crate) fn scaled_quadratic(d_value: &ExactRational) -> (Vec<ExactInteger>, ExactInteger) {
    let a = d_value.numer();
    let b = d_value.denom();
    let middle = -(BigInt::from(2) * (a + BigInt::from(2) * b));
    let disc = &middle * &middle - BigInt::from(4) * a * a;
    (vec![a.clone(), middle, a.clone()], disc)
}

pub(crate) fn exact_sqrt(x: &ExactInteger) -> Option<ExactInteger> {
    let root = integer_sqrt(x).ok()?;
    (&root * &root == *x).then_some(root)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Starting precision for separation exclusions; doubled on demand up to
    /// the 4096-bit cap.
    pub separation_bits: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            separation_bits: 128,
        }
    }
}

/// Excludes `candidate` as the value of `s = tan²(2d'π/q)`.
pub fn exclude_candidate(
    q: &ExactInteger,
    d_prime: &ExactInteger,
    candidate: &ExactRational,
    options: &CertifyOptions,
) -> Result<Exclusion> {
    static VALUES: OnceLock<QValueCache> = OnceLock::new();
    let q_small = q.to_u64().ok_or_else(|| Error::BadFamilyIndex(q.clone()))?;
    let value = if candidate.is_integer() {
        ExactRational::from_integer(VALUES.get_or_init(Default::default).eval(q_small, candidate.numer())?)
    } else {
        eval_at_rational(&cached_q(q_small)?, candidate)
    };
    if !value.is_zero() {
        return Ok(Exclusion {
            candidate: candidate.clone(),
            method: ExclusionMethod::Nonroot { q_value: value },
        });
    }
    let s_angle = reduce_for_tan(&ExactRational::new(BigInt::from(2) * d_prime, q.clone())?);
    let mut bits = options.separation_bits.max(8);
    loop {
        let interval = eval_tan_squared(&s_angle, bits)?;
        if !interval.contains(candidate) {
            return Ok(Exclusion {
                candidate: candidate.clone(),
                method: ExclusionMethod::Separation {
                    interval_lo: interval.lo().clone(),
                    interval_hi: interval.hi().clone(),
                    bits,
                },
            });
        }
        if bits >= MAX_BITS {
            return Err(Error::PrecisionCapExceeded {
                candidate: candidate.clone(),
                cap: MAX_BITS,
            });
        }
        bits = (2 * bits).min(MAX_BITS);
    }
}

/// Steps and resulting `tan²` fact for the angle `r`.
fn tan_squared_steps(r: &ExactRational, options: &CertifyOptions) -> Result<(Vec<CertStep>, BaseValueOrIrrational)> {
    let start = reduce_for_tan(r);
    if let Some(value) = known_tan_squared(start.n()) {
        let step = CertStep::Base {
            angle: start.value().clone(),
            value: value.clone(),
        };
        return Ok((vec![step], BaseValueOrIrrational::Known(value)));
    }
    let (_, odd) = odd_part(start.n())?;
    let odd_small = odd.to_u64();
    let steps = if odd_small.is_some_and(|q| q == 1 || q == 3) {
        let stop = BigInt::from(if odd_small == Some(1) { 8 } else { 12 });
        let chain = doubling_chain(&start, &stop)?;
        let next = double_for_tan(chain.last());
        let Some(BaseValue::Value(d_value)) = known_tan_squared(next.n()) else {
            unreachable!("doubling denominator 8 or 12 lands on 4 or 6");
        };
        let (quad_coeffs, discriminant) = scaled_quadratic(&d_value);
        let square_witness = exact_sqrt(&discriminant);
        vec![
            chain_step(chain.angles()),
            CertStep::BackwardQuadratic {
                den: stop,
                d_value,
                quad_coeffs,
                discriminant,
                square_witness,
            },
        ]
    } else {
        let chain = doubling_chain(&start, &odd)?;
        let d_prime = chain.last().d().clone();
        let q_small = odd_small.ok_or_else(|| Error::BadFamilyIndex(odd.clone()))?;
        let coeffs = cached_q(q_small)?;
        let candidates = divisors(&odd)?;
        let exclusions = candidates
            .iter()
            .map(|c| exclude_candidate(&odd, &d_prime, &ExactRational::from_integer(c.clone()), options))
            .collect::<Result<Vec<_>>>()?;
        vec![
            chain_step(chain.angles()),
            CertStep::Poly {
                q: odd,
                coeffs,
                candidates,
                exclusions,
            },
        ]
    };
    Ok((steps, BaseValueOrIrrational::Irrational))
}

enum BaseValueOrIrrational {
    Known(BaseValue),
    Irrational,
}

fn chain_step(angles: &[ReducedAngle]) -> CertStep {
    CertStep::Chain {
        angles: angles.iter().map(|a| a.value().clone()).collect(),
    }
}

fn sqrt_step(radicand: &ExactRational) -> (CertStep, Option<ExactRational>) {
    let root = is_perfect_square(radicand);
    let step = CertStep::SqrtStep {
        radicand: radicand.clone(),
        square_test_result: root.clone(),
    };
    (step, root)
}

/// Builds a certificate for `function(rπ)` with default options.
pub fn certify(r: &ExactRational, function: TrigFunction) -> Result<Certificate> {
    certify_with(r, function, &CertifyOptions::default())
}

pub fn certify_with(
    r: &ExactRational,
    function: TrigFunction,
    options: &CertifyOptions,
) -> Result<Certificate> {
    let (core, fact) = tan_squared_steps(r, options)?;
    let tan_squared = match fact {
        BaseValueOrIrrational::Known(BaseValue::Pole) => TrigVerdict::Pole,
        BaseValueOrIrrational::Known(BaseValue::Value(v)) => TrigVerdict::Exact(v),
        BaseValueOrIrrational::Irrational => TrigVerdict::Irrational,
    };
    let cos_squared = || match &tan_squared {
        TrigVerdict::Pole => TrigVerdict::Exact(ExactRational::zero()),
        TrigVerdict::Exact(t) => TrigVerdict::Exact(
            (ExactRational::one() + t).recip().expect("1 + tan² > 0"),
        ),
        TrigVerdict::Irrational => TrigVerdict::Irrational,
    };
    let identity = |relation| CertStep::IdentityStep { relation };

    let mut steps = Vec::new();
    let verdict = match function {
        TrigFunction::TanSquared => {
            steps.extend(core);
            tan_squared.clone()
        }
        TrigFunction::CosSquared => {
            steps.push(identity(Relation::CosSquaredFromTanSquared));
            steps.extend(core);
            cos_squared()
        }
        TrigFunction::Tan => {
            steps.push(identity(Relation::TanSquaredIsSquare));
            steps.extend(core);
            match &tan_squared {
                TrigVerdict::Exact(t) => {
                    let (step, root) = sqrt_step(t);
                    steps.push(step);
                    match root {
                        Some(root) => TrigVerdict::Exact(reduce_for_tan(r).sign().apply(root)),
                        None => TrigVerdict::Irrational,
                    }
                }
                other => other.clone(),
            }
        }
        TrigFunction::Cos => {
            steps.push(identity(Relation::CosSquaredIsSquare));
            steps.push(identity(Relation::CosSquaredFromTanSquared));
            steps.extend(core);
            match cos_squared() {
                TrigVerdict::Exact(c2) => {
                    let (step, root) = sqrt_step(&c2);
                    steps.push(step);
                    match root {
                        Some(root) if verify::cos_is_negative(r) => TrigVerdict::Exact(-root),
                        Some(root) => TrigVerdict::Exact(root),
                        None => TrigVerdict::Irrational,
                    }
                }
                other => other,
            }
        }
    };
    Ok(Certificate {
        version: CERTIFICATE_VERSION,
        input: r.clone(),
        function,
        verdict,
        steps,
    })
}
