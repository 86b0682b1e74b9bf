//! Integer polynomials in one variable: the `P`/`Q` families whose roots are
//! `tan(kπ/n)` and `tan²(kπ/n)`, exact evaluation, and a Rational Root
//! Theorem solver.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial_row, divisors, gcd, ExactInteger, ExactRational};

/// Coefficients in ascending degree order; `coeffs[j]` multiplies `X^j`.
///
/// Trailing zeros are trimmed on construction, so the zero polynomial is the
/// empty coefficient list and the last coefficient is always nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Arc<[ExactInteger]>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<ExactInteger>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self {
            coeffs: coeffs.into(),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[ExactInteger] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactInteger> {
        self.coeffs.last()
    }

    pub fn constant(&self) -> ExactInteger {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// The coefficient of `X^j` (zero past the degree).
    pub fn coeff(&self, j: usize) -> ExactInteger {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// `p(X²)` as a new polynomial.
    pub fn compose_square(&self) -> Self {
        let mut out = vec![BigInt::zero(); (2 * self.coeffs.len()).saturating_sub(1)];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[2 * j] = c.clone();
        }
        Self::new(out)
    }

    pub fn eval_at_integer(&self, x: &ExactInteger) -> ExactInteger {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Numerator of `b^deg · p(a/b)`, i.e. `Σ c_j a^j b^(deg-j)`.
    fn eval_homogeneous(&self, a: &ExactInteger, b: &ExactInteger) -> ExactInteger {
        if b.is_one() {
            return self.eval_at_integer(a);
        }
        let mut acc = BigInt::zero();
        let mut b_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc *= a;
            acc += c * &b_pow;
            b_pow *= b;
        }
        acc
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()
    }
}

/// Renders in descending order, e.g. `X^2 - 10*X + 5`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let show_mag = j == 0 || !mag.is_one();
            match (j, show_mag) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{mag}*X")?,
                (1, false) => write!(f, "X")?,
                (_, true) => write!(f, "{mag}*X^{j}")?,
                (_, false) => write!(f, "X^{j}")?,
            }
        }
        Ok(())
    }
}

fn family_half_degree(n: &ExactInteger) -> Result<u64> {
    let small = n.to_u64().filter(|&v| v >= 3 && v % 2 == 1);
    small
        .map(|v| (v - 1) / 2)
        .ok_or_else(|| Error::BadFamilyIndex(n.clone()))
}

fn signed(value: &ExactInteger, negate: bool) -> ExactInteger {
    if negate {
        -value
    } else {
        value.clone()
    }
}

/// `P_n = Σ_{j=0}^{m} (-1)^(m+j) C(n, 2j+1) X^(2j)` for odd `n = 2m + 1 >= 3`.
pub fn build_p(n: &ExactInteger) -> Result<IntPolynomial> {
    let m = family_half_degree(n)?;
    let row = binomial_row(2 * m + 1);
    let mut coeffs = vec![BigInt::zero(); 2 * m as usize + 1];
    for j in 0..=m {
        coeffs[2 * j as usize] = signed(&row[2 * j as usize + 1], (m + j) % 2 == 1);
    }
    Ok(IntPolynomial::new(coeffs))
}

/// `Q_n = Σ_{j=0}^{m} (-1)^(m+j) C(n, 2j+1) X^j`, the monic polynomial whose
/// roots are `tan²(kπ/n)` for `k = 1..=m`.
pub fn build_q(n: &ExactInteger) -> Result<IntPolynomial> {
    let m = family_half_degree(n)?;
    let row = binomial_row(2 * m + 1);
    let coeffs = (0..=m)
        .map(|j| signed(&row[2 * j as usize + 1], (m + j) % 2 == 1))
        .collect();
    Ok(IntPolynomial::new(coeffs))
}

/// Memoized [`build_q`]; certificates for many angles share the same odd part.
pub fn cached_q(n: u64) -> Result<IntPolynomial> {
    static CACHE: OnceLock<RwLock<HashMap<u64, IntPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(q) = cache.read().expect("q cache poisoned").get(&n) {
        return Ok(q.clone());
    }
    let q = build_q(&BigInt::from(n))?;
    cache
        .write()
        .expect("q cache poisoned")
        .insert(n, q.clone());
    Ok(q)
}

/// Memo table for `Q_q(c)` at integers `c`. The certifier and the verifier
/// each keep their own, so neither trusts values computed by the other.
#[derive(Default)]
pub struct QValueCache(RwLock<HashMap<(u64, ExactInteger), ExactInteger>>);

impl QValueCache {
    pub fn eval(&self, q: u64, c: &ExactInteger) -> Result<ExactInteger> {
        let key = (q, c.clone());
        if let Some(v) = self.0.read().expect("value cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let value = cached_q(q)?.eval_at_integer(c);
        self.0
            .write()
            .expect("value cache poisoned")
            .insert(key, value.clone());
        Ok(value)
    }
}

pub fn eval_at_rational(p: &IntPolynomial, x: &ExactRational) -> ExactRational {
    let Some(deg) = p.degree() else {
        return ExactRational::zero();
    };
    if x.is_integer() {
        return ExactRational::from_integer(p.eval_at_integer(x.numer()));
    }
    let num = p.eval_homogeneous(x.numer(), x.denom());
    let den = num_traits::pow(x.denom().clone(), deg);
    ExactRational::new(num, den).expect("positive denominator power")
}

/// Every rational root of `p`, ascending and without multiplicity.
///
/// Candidates are `±a/b` with `a` dividing the lowest nonzero coefficient and
/// `b` dividing the leading one; each is confirmed by exact evaluation.
pub fn rational_roots(p: &IntPolynomial) -> Result<Vec<ExactRational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let shift = p
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial");
    let reduced = IntPolynomial::new(p.coeffs()[shift..].to_vec());
    let mut roots = Vec::new();
    if shift > 0 {
        roots.push(ExactRational::zero());
    }
    let low = divisors(&reduced.constant().abs())?;
    let high = divisors(&reduced.leading().expect("nonzero").abs())?;
    for a in &low {
        for b in &high {
            if !gcd(a, b).is_one() {
                continue;
            }
            for a in [a.clone(), -a] {
                if reduced.eval_homogeneous(&a, b).is_zero() {
                    roots.push(ExactRational::new(a, b.clone())?);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn p_family_small_cases() {
        // Hand expansion of the defining sum.
        assert_eq!(build_p(&big(3)).unwrap(), IntPolynomial::from_i64(&[-3, 0, 1]));
        assert_eq!(
            build_p(&big(5)).unwrap(),
            IntPolynomial::from_i64(&[5, 0, -10, 0, 1])
        );
        assert_eq!(
            build_p(&big(7)).unwrap(),
            IntPolynomial::from_i64(&[-7, 0, 35, 0, -21, 0, 1])
        );
    }

    #[test]
    fn q_family_small_cases() {
        assert_eq!(build_q(&big(3)).unwrap(), IntPolynomial::from_i64(&[-3, 1]));
        assert_eq!(build_q(&big(5)).unwrap(), IntPolynomial::from_i64(&[5, -10, 1]));
        assert_eq!(
            build_q(&big(7)).unwrap(),
            IntPolynomial::from_i64(&[-7, 35, -21, 1])
        );
        assert_eq!(
            build_q(&big(9)).unwrap(),
            IntPolynomial::from_i64(&[9, -84, 126, -36, 1])
        );
    }

    #[test]
    fn family_rejects_bad_index() {
        for n in [-3, 0, 1, 2, 4, 10] {
            assert!(build_p(&big(n)).is_err(), "n = {n}");
            assert!(build_q(&big(n)).is_err(), "n = {n}");
        }
    }

    #[test]
    fn q_composed_with_square_is_p() {
        for n in (3..=99).step_by(2) {
            let n = big(n);
            assert_eq!(build_q(&n).unwrap().compose_square(), build_p(&n).unwrap());
        }
    }

    #[test]
    fn eval_examples() {
        let q3 = IntPolynomial::from_i64(&[-3, 1]);
        assert_eq!(eval_at_rational(&q3, &3.into()), ExactRational::zero());
        let q5 = IntPolynomial::from_i64(&[5, -10, 1]);
        assert_eq!(eval_at_rational(&q5, &1.into()), (-4).into());
        let e3 = IntPolynomial::from_i64(&[3, -10, 3]);
        assert_eq!(
            eval_at_rational(&e3, &ExactRational::frac(1, 3)),
            ExactRational::zero()
        );
        assert_eq!(
            eval_at_rational(&IntPolynomial::new(vec![]), &5.into()),
            ExactRational::zero()
        );
    }

    #[test]
    fn roots_examples() {
        let e3 = IntPolynomial::from_i64(&[3, -10, 3]);
        assert_eq!(
            rational_roots(&e3).unwrap(),
            vec![ExactRational::frac(1, 3), 3.into()]
        );
        assert!(rational_roots(&IntPolynomial::from_i64(&[5, -10, 1]))
            .unwrap()
            .is_empty());
        assert!(rational_roots(&IntPolynomial::from_i64(&[1, -6, 1]))
            .unwrap()
            .is_empty());
        assert_eq!(
            rational_roots(&IntPolynomial::new(vec![])),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn roots_with_zero_constant_term() {
        // X^3 (2X + 1)(X - 2) = 2X^5 - 3X^4 - 2X^3
        let p = IntPolynomial::from_i64(&[0, 0, 0, -2, -3, 2]);
        assert_eq!(
            rational_roots(&p).unwrap(),
            vec![ExactRational::frac(-1, 2), 0.into(), 2.into()]
        );
    }

    #[test]
    fn roots_ignore_multiplicity() {
        // (X - 1)^2 (X + 3)
        let p = IntPolynomial::from_i64(&[3, -5, 1, 1]);
        assert_eq!(rational_roots(&p).unwrap(), vec![(-3).into(), 1.into()]);
    }

    #[test]
    fn display_descending() {
        assert_eq!(build_q(&big(5)).unwrap().to_string(), "X^2 - 10*X + 5");
        assert_eq!(IntPolynomial::from_i64(&[0, -1]).to_string(), "-X");
    }

    #[test]
    fn cached_matches_fresh() {
        assert_eq!(cached_q(21).unwrap(), build_q(&big(21)).unwrap());
        assert_eq!(cached_q(21).unwrap(), cached_q(21).unwrap());
    }
}
