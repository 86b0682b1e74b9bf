//! Decimal-string encodings for arbitrary-precision integers on the wire.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

use crate::polynomial::IntPolynomial;

/// Accepts only canonical decimal renderings: no `+`, no leading zeros, no `-0`.
fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    let canonical = match digits.as_bytes() {
        [] => false,
        [b'0'] => digits.len() == text.len(),
        [first, ..] => *first != b'0' && digits.bytes().all(|b| b.is_ascii_digit()),
    };
    canonical.then(|| text.parse().expect("validated digits"))
}

pub mod integer {
    use super::*;

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        parse_integer(&text).ok_or_else(|| D::Error::custom(format!("bad integer {text:?}")))
    }
}

pub mod integers {
    use serde::ser::SerializeSeq;

    use super::*;

    pub fn serialize<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_integer(t).ok_or_else(|| D::Error::custom(format!("bad integer {t:?}"))))
            .collect()
    }
}

pub mod optional_integer {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_integer(&t).ok_or_else(|| D::Error::custom(format!("bad integer {t:?}"))))
            .transpose()
    }
}


pub mod polynomial {
    use super::*;

    pub fn serialize<S: Serializer>(p: &IntPolynomial, s: S) -> Result<S::Ok, S::Error> {
        integers::serialize(p.coeffs(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntPolynomial, D::Error> {
        let coeffs = integers::deserialize(d)?;
        let len = coeffs.len();
        let p = IntPolynomial::new(coeffs);
        if p.coeffs().len() != len {
            return Err(D::Error::custom("polynomial has trailing zero coefficients"));
        }
        Ok(p)
    }
}
