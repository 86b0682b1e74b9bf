//! Arbitrary-precision integers and canonical rationals, plus the handful of
//! number-theory helpers the rest of the crate leans on.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type ExactInteger = BigInt;

/// A fraction in lowest terms with a positive denominator.
///
/// Canonical form is enforced on construction, so derived equality and
/// hashing are semantic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: ExactInteger, den: ExactInteger) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self(BigRational::new(num, den)))
    }

    /// `mantissa · 2^-exp`, reduced by stripping shared factors of two
    /// instead of a general gcd.
    pub fn dyadic(mantissa: ExactInteger, exp: u32) -> Self {
        let shift = mantissa.trailing_zeros().map_or(exp, |tz| tz.min(exp as u64) as u32);
        let num = mantissa >> shift;
        let den = ExactInteger::one() << (exp - shift);
        Self(BigRational::new_raw(num, den))
    }

    pub fn from_integer(value: impl Into<ExactInteger>) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    /// Small-integer convenience; panics when `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num.into(), den.into()).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &ExactInteger {
        self.0.numer()
    }

    pub fn denom(&self) -> &ExactInteger {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self(self.0.recip()))
    }

    pub fn floor(&self) -> ExactInteger {
        self.0.floor().to_integer()
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract_floor(&self) -> Self {
        self - &Self::from_integer(self.floor())
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Parses and additionally requires the text to already be the canonical
    /// rendering (`"3"`, `"-1/3"`; never `"2/6"`, `"3/1"` or `"+1"`).
    pub fn parse_canonical(text: &str) -> Result<Self> {
        let value: Self = text.parse()?;
        if value.to_string() != text {
            return Err(Error::ParseRational(text.to_string()));
        }
        Ok(value)
    }
}

impl From<BigRational> for ExactRational {
    fn from(value: BigRational) -> Self {
        Self(value)
    }
}

impl From<i64> for ExactRational {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

// num-rational orders through repeated floor division; cross-multiplying is
// much cheaper for the dyadic and integer values that dominate here.
impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.denom() == other.denom() {
            return self.numer().cmp(other.numer());
        }
        (self.numer() * other.denom()).cmp(&(other.numer() * self.denom()))
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_signed_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text).ok()
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::ParseRational(text.to_string());
        match text.split_once('/') {
            None => parse_signed_integer(text)
                .map(Self::from_integer)
                .ok_or_else(bad),
            Some((num, den)) => {
                let num = parse_signed_integer(num).ok_or_else(bad)?;
                if !den.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let den = parse_signed_integer(den).ok_or_else(bad)?;
                Self::new(num, den)
            }
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Self::parse_canonical(&text).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, like the underlying ratio type.
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

/// Nonnegative greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &ExactInteger, b: &ExactInteger) -> ExactInteger {
    a.gcd(b)
}

pub fn make_rational(num: ExactInteger, den: ExactInteger) -> Result<ExactRational> {
    ExactRational::new(num, den)
}

/// All positive divisors of `n` in ascending order, by trial division up to `sqrt(n)`.
pub fn divisors(n: &ExactInteger) -> Result<Vec<ExactInteger>> {
    if !n.is_positive() {
        return Err(Error::NotPositive(n.clone()));
    }
    let small = n.to_u64().ok_or_else(|| Error::TooLargeForTrialDivision(n.clone()))?;
    Ok(divisors_u64(small).into_iter().map(BigInt::from).collect())
}

fn divisors_u64(n: u64) -> Vec<u64> {
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = 1u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            if d != n / d {
                high.push(n / d);
            }
            low.push(d);
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    low
}

/// `floor(sqrt(x))`.
pub fn integer_sqrt(x: &ExactInteger) -> Result<ExactInteger> {
    if x.is_negative() {
        return Err(Error::NegativeRadicand(x.clone()));
    }
    Ok(x.sqrt())
}

fn exact_integer_sqrt(x: &ExactInteger) -> Option<ExactInteger> {
    let root = integer_sqrt(x).ok()?;
    (&root * &root == *x).then_some(root)
}

/// The nonnegative rational square root of `q`, when one exists.
///
/// `q` is in lowest terms, so it is a rational square exactly when its
/// numerator and denominator are both integer squares.
pub fn is_perfect_square(q: &ExactRational) -> Option<ExactRational> {
    if q.is_negative() {
        return None;
    }
    let num = exact_integer_sqrt(q.numer())?;
    let den = exact_integer_sqrt(q.denom())?;
    Some(ExactRational::new(num, den).expect("square root of a positive denominator"))
}

/// Exact `C(n, k)` for `0 <= k <= n`.
pub fn binomial(n: &ExactInteger, k: &ExactInteger) -> Result<ExactInteger> {
    if k.is_negative() || k > n {
        return Err(Error::BinomialRange {
            n: n.clone(),
            k: k.clone(),
        });
    }
    let k = std::cmp::min(k.clone(), n - k);
    let mut acc = BigInt::one();
    let mut i = BigInt::zero();
    while i < k {
        // acc = C(n, i) here; C(n, i + 1) = C(n, i) * (n - i) / (i + 1) is exact.
        acc *= n - &i;
        i += 1;
        acc /= &i;
    }
    Ok(acc)
}

/// Row `C(n, 0..=n)` computed incrementally.
pub(crate) fn binomial_row(n: u64) -> Vec<ExactInteger> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut acc = BigInt::one();
    row.push(acc.clone());
    for i in 0..n {
        acc *= n - i;
        acc /= i + 1;
        row.push(acc.clone());
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> ExactInteger {
        BigInt::from(v)
    }

    #[test]
    fn dyadic_is_canonical() {
        assert_eq!(ExactRational::dyadic(12.into(), 4), ExactRational::frac(3, 4));
        assert_eq!(ExactRational::dyadic((-5).into(), 0), ExactRational::frac(-5, 1));
        assert_eq!(ExactRational::dyadic(0.into(), 9), ExactRational::zero());
        assert_eq!(ExactRational::dyadic(1024.into(), 3), ExactRational::frac(128, 1));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&int(12), &int(18)), int(6));
        assert_eq!(gcd(&int(-7), &int(0)), int(7));
        assert_eq!(gcd(&int(0), &int(0)), int(0));
        // k - 1 and k + 1 at k = 2
        assert_eq!(gcd(&int(1), &int(3)), int(1));
    }

    #[test]
    fn make_rational_canonicalizes() {
        assert_eq!(make_rational(int(2), int(6)).unwrap(), ExactRational::frac(1, 3));
        let neg = make_rational(int(3), int(-9)).unwrap();
        assert_eq!(neg.to_string(), "-1/3");
        assert_eq!(neg.denom(), &int(3));
        let ten = make_rational(int(10), int(1)).unwrap();
        assert_eq!(ten.numer(), &int(10));
        assert_eq!(ten.denom(), &int(1));
        assert_eq!(make_rational(int(1), int(0)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn divisors_examples() {
        let as_i64 = |n: i64| -> Vec<i64> {
            divisors(&int(n))
                .unwrap()
                .iter()
                .map(|d| d.to_i64().unwrap())
                .collect()
        };
        assert_eq!(as_i64(15), vec![1, 3, 5, 15]);
        assert_eq!(as_i64(1), vec![1]);
        assert_eq!(as_i64(9), vec![1, 3, 9]);
        assert!(divisors(&int(0)).is_err());
        assert!(divisors(&int(-4)).is_err());
    }

    #[test]
    fn divisors_reject_inputs_beyond_u64() {
        let n: BigInt = BigInt::from(u64::MAX) + 1;
        assert!(matches!(divisors(&n), Err(Error::TooLargeForTrialDivision(_))));
        let ds = divisors(&BigInt::from(720_720u64)).unwrap();
        assert_eq!(ds.len(), 240);
    }

    #[test]
    fn integer_sqrt_examples() {
        assert_eq!(integer_sqrt(&int(4)).unwrap(), int(2));
        let r = integer_sqrt(&int(32)).unwrap();
        assert_eq!(r, int(5));
        assert_ne!(&r * &r, int(32));
        assert_eq!(integer_sqrt(&int(0)).unwrap(), int(0));
        assert!(integer_sqrt(&int(-1)).is_err());
    }

    #[test]
    fn perfect_square_examples() {
        assert_eq!(is_perfect_square(&4.into()), Some(2.into()));
        assert_eq!(is_perfect_square(&2.into()), None);
        assert_eq!(
            is_perfect_square(&ExactRational::frac(4, 9)),
            Some(ExactRational::frac(2, 3))
        );
        assert_eq!(is_perfect_square(&(-4).into()), None);
        assert_eq!(is_perfect_square(&ExactRational::frac(1, 2)), None);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(&int(7), &int(3)).unwrap(), int(35));
        assert_eq!(binomial(&int(5), &int(3)).unwrap(), int(10));
        assert_eq!(binomial(&int(9), &int(0)).unwrap(), int(1));
        assert!(binomial(&int(3), &int(4)).is_err());
        assert!(binomial(&int(3), &int(-1)).is_err());
    }

    #[test]
    fn binomial_row_matches_pointwise() {
        let row = binomial_row(30);
        for (k, c) in row.iter().enumerate() {
            assert_eq!(c, &binomial(&int(30), &int(k as i64)).unwrap());
        }
    }

    #[test]
    fn parse_and_render() {
        assert_eq!("-2/6".parse::<ExactRational>().unwrap().to_string(), "-1/3");
        assert_eq!("7".parse::<ExactRational>().unwrap(), 7.into());
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("1/-2".parse::<ExactRational>().is_err());
        assert!("x/2".parse::<ExactRational>().is_err());
        assert!(ExactRational::parse_canonical("2/6").is_err());
        assert!(ExactRational::parse_canonical("3/1").is_err());
        assert!(ExactRational::parse_canonical("-1/3").is_ok());
    }

    #[test]
    fn fractional_part() {
        assert_eq!(ExactRational::frac(7, 6).fract_floor(), ExactRational::frac(1, 6));
        assert_eq!(ExactRational::frac(-1, 4).fract_floor(), ExactRational::frac(3, 4));
    }
}
