//! Closed-form classification of `tan²`, `tan`, `cos²` and `cos` at rational
//! multiples of π.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::angle::{reduce_for_cos, reduce_for_tan};
use crate::exact::ExactRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrigFunction {
    #[serde(rename = "tan2")]
    TanSquared,
    #[serde(rename = "tan")]
    Tan,
    #[serde(rename = "cos2")]
    CosSquared,
    #[serde(rename = "cos")]
    Cos,
}

impl TrigFunction {
    pub const ALL: [TrigFunction; 4] = [
        TrigFunction::TanSquared,
        TrigFunction::Tan,
        TrigFunction::CosSquared,
        TrigFunction::Cos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TrigFunction::TanSquared => "tan2",
            TrigFunction::Tan => "tan",
            TrigFunction::CosSquared => "cos2",
            TrigFunction::Cos => "cos",
        }
    }

    /// Every rational value the function can take at a rational angle.
    pub fn exceptional_values(self) -> Vec<ExactRational> {
        let q = ExactRational::frac;
        match self {
            TrigFunction::TanSquared => vec![q(0, 1), q(1, 1), q(1, 3), q(3, 1)],
            TrigFunction::Tan => vec![q(-1, 1), q(0, 1), q(1, 1)],
            TrigFunction::CosSquared => {
                vec![q(0, 1), q(1, 1), q(1, 2), q(1, 4), q(3, 4)]
            }
            TrigFunction::Cos => vec![q(0, 1), q(1, 1), q(-1, 1), q(1, 2), q(-1, 2)],
        }
    }

    pub fn classify(self, r: &ExactRational) -> TrigVerdict {
        match self {
            TrigFunction::TanSquared => classify_tan_squared(r),
            TrigFunction::Tan => classify_tan(r),
            TrigFunction::CosSquared => classify_cos_squared(r),
            TrigFunction::Cos => classify_cos(r),
        }
    }
}

impl fmt::Display for TrigFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TrigFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown function {s:?} (expected tan2, tan, cos2 or cos)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TrigVerdict {
    Pole,
    Exact(ExactRational),
    Irrational,
}

impl TrigVerdict {
    pub fn exact_value(&self) -> Option<&ExactRational> {
        match self {
            TrigVerdict::Exact(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for TrigVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrigVerdict::Pole => f.write_str("pole"),
            TrigVerdict::Exact(v) => write!(f, "exact {v}"),
            TrigVerdict::Irrational => f.write_str("irrational"),
        }
    }
}

fn small_den(value: &ExactRational) -> Option<u64> {
    value.denom().to_u64()
}

pub fn classify_tan_squared(r: &ExactRational) -> TrigVerdict {
    let angle = reduce_for_tan(r);
    match small_den(angle.value()) {
        Some(1) => TrigVerdict::Exact(ExactRational::zero()),
        Some(2) => TrigVerdict::Pole,
        Some(3) => TrigVerdict::Exact(3.into()),
        Some(4) => TrigVerdict::Exact(1.into()),
        Some(6) => TrigVerdict::Exact(ExactRational::frac(1, 3)),
        _ => TrigVerdict::Irrational,
    }
}

pub fn classify_tan(r: &ExactRational) -> TrigVerdict {
    let angle = reduce_for_tan(r);
    match small_den(angle.value()) {
        Some(1) => TrigVerdict::Exact(ExactRational::zero()),
        Some(2) => TrigVerdict::Pole,
        Some(4) => TrigVerdict::Exact(angle.sign().apply(ExactRational::one())),
        _ => TrigVerdict::Irrational,
    }
}

/// Derived from `tan²` through `cos² = 1 / (1 + tan²)`; the pole maps to 0.
pub fn classify_cos_squared(r: &ExactRational) -> TrigVerdict {
    match classify_tan_squared(r) {
        TrigVerdict::Pole => TrigVerdict::Exact(ExactRational::zero()),
        TrigVerdict::Exact(t) => TrigVerdict::Exact(
            (ExactRational::one() + t)
                .recip()
                .expect("1 + tan² is positive"),
        ),
        TrigVerdict::Irrational => TrigVerdict::Irrational,
    }
}

/// Table on the reduced denominator in `[0, 1]`; the sign flips past `1/2`,
/// where `cos` becomes negative.
pub fn classify_cos(r: &ExactRational) -> TrigVerdict {
    let angle = reduce_for_cos(r);
    let negative = angle.value() > &ExactRational::frac(1, 2);
    let signed = |v: ExactRational| if negative { -v } else { v };
    match small_den(angle.value()) {
        Some(1) => TrigVerdict::Exact(signed(ExactRational::one())),
        Some(2) => TrigVerdict::Exact(ExactRational::zero()),
        Some(3) => TrigVerdict::Exact(signed(ExactRational::frac(1, 2))),
        _ => TrigVerdict::Irrational,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::frac(n, d)
    }

    #[test]
    fn tan_squared_examples() {
        assert_eq!(classify_tan_squared(&q(1, 6)), TrigVerdict::Exact(q(1, 3)));
        assert_eq!(classify_tan_squared(&q(1, 5)), TrigVerdict::Irrational);
        assert_eq!(classify_tan_squared(&q(1, 2)), TrigVerdict::Pole);
        assert_eq!(classify_tan_squared(&q(-2, 3)), TrigVerdict::Exact(q(3, 1)));
    }

    #[test]
    fn tan_examples() {
        assert_eq!(classify_tan(&q(3, 4)), TrigVerdict::Exact(q(-1, 1)));
        assert_eq!(classify_tan(&q(1, 3)), TrigVerdict::Irrational);
        assert_eq!(classify_tan(&q(2, 1)), TrigVerdict::Exact(q(0, 1)));
        assert_eq!(classify_tan(&q(5, 4)), TrigVerdict::Exact(q(1, 1)));
        assert_eq!(classify_tan(&q(-1, 2)), TrigVerdict::Pole);
    }

    #[test]
    fn cos_squared_examples() {
        assert_eq!(classify_cos_squared(&q(1, 3)), TrigVerdict::Exact(q(1, 4)));
        assert_eq!(classify_cos_squared(&q(1, 2)), TrigVerdict::Exact(q(0, 1)));
        assert_eq!(classify_cos_squared(&q(1, 5)), TrigVerdict::Irrational);
        assert_eq!(classify_cos_squared(&q(5, 6)), TrigVerdict::Exact(q(3, 4)));
    }

    #[test]
    fn cos_examples() {
        assert_eq!(classify_cos(&q(2, 3)), TrigVerdict::Exact(q(-1, 2)));
        assert_eq!(classify_cos(&q(1, 4)), TrigVerdict::Irrational);
        assert_eq!(classify_cos(&q(1, 1)), TrigVerdict::Exact(q(-1, 1)));
        assert_eq!(classify_cos(&q(4, 3)), TrigVerdict::Exact(q(-1, 2)));
        assert_eq!(classify_cos(&q(5, 3)), TrigVerdict::Exact(q(1, 2)));
        assert_eq!(classify_cos(&q(-1, 2)), TrigVerdict::Exact(q(0, 1)));
    }

    #[test]
    fn function_names_round_trip() {
        for f in TrigFunction::ALL {
            assert_eq!(f.name().parse::<TrigFunction>().unwrap(), f);
        }
        assert!("sin".parse::<TrigFunction>().is_err());
    }
}
