//! Rational angles (as multiples of π) and the double-angle algebra on `tan²`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{integer_sqrt, is_perfect_square, ExactInteger, ExactRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn apply(self, value: ExactRational) -> ExactRational {
        match self {
            Sign::Positive => value,
            Sign::Negative => -value,
        }
    }
}

/// Canonical representative `d/n` of an angle `rπ`, plus the sign picked up
/// while folding (only meaningful for `tan`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedAngle {
    value: ExactRational,
    sign: Sign,
}

impl ReducedAngle {
    pub fn value(&self) -> &ExactRational {
        &self.value
    }

    pub fn d(&self) -> &ExactInteger {
        self.value.numer()
    }

    pub fn n(&self) -> &ExactInteger {
        self.value.denom()
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The `tan` pole: representative `1/2`.
    pub fn is_tan_pole(&self) -> bool {
        self.n() == &BigInt::from(2)
    }
}

impl fmt::Display for ReducedAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Negative {
            write!(f, "-")?;
        }
        write!(f, "{}", self.value)
    }
}

/// Folds `r` into `[0, 1/2]` using period 1 and `tan((1-x)π) = -tan(xπ)`.
pub fn reduce_for_tan(r: &ExactRational) -> ReducedAngle {
    let frac = r.fract_floor();
    let half = ExactRational::frac(1, 2);
    if frac <= half {
        ReducedAngle {
            value: frac,
            sign: Sign::Positive,
        }
    } else {
        ReducedAngle {
            value: ExactRational::one() - frac,
            sign: Sign::Negative,
        }
    }
}

/// Folds `r` into `[0, 1]` using period 2 and `cos((2-x)π) = cos(xπ)`.
pub fn reduce_for_cos(r: &ExactRational) -> ReducedAngle {
    let two = ExactRational::from_integer(2);
    let modded = r - &(&two * &ExactRational::from_integer((r / &two).floor()));
    let value = if modded > ExactRational::one() {
        two - modded
    } else {
        modded
    };
    ReducedAngle {
        value,
        sign: Sign::Positive,
    }
}

/// `n = 2^a · q` with `q` odd.
pub fn odd_part(n: &ExactInteger) -> Result<(u64, ExactInteger)> {
    if !n.is_positive() {
        return Err(Error::NotPositive(n.clone()));
    }
    let a = n.trailing_zeros().unwrap_or(0);
    Ok((a, n >> a))
}

/// `T ↦ 4T / (1 - T)²`, which sends `tan²(rπ)` to `tan²(2rπ)`.
pub fn double_angle_forward(t: &ExactRational) -> Result<ExactRational> {
    let gap = ExactRational::one() - t;
    if gap.is_zero() {
        return Err(Error::DoubleAnglePole);
    }
    Ok(&(ExactRational::from_integer(4) * t) / &gap.square())
}

/// All rational `x` with `D·x² - 2(D+2)·x + D = 0`, i.e. every rational
/// preimage of `D` under [`double_angle_forward`], ascending.
pub fn invert_double_angle(target: &ExactRational) -> Result<Vec<ExactRational>> {
    if target.is_negative() {
        return Err(Error::NegativeRational(target.clone()));
    }
    if target.is_zero() {
        return Ok(vec![ExactRational::zero()]);
    }
    // discriminant / 4 = (D+2)² - D² = 4(D+1)
    let Some(root) = is_perfect_square(&(target + &ExactRational::one())) else {
        return Ok(Vec::new());
    };
    let centre = target + &ExactRational::from_integer(2);
    let spread = ExactRational::from_integer(2) * root;
    let mut roots = vec![
        &(&centre - &spread) / target,
        &(&centre + &spread) / target,
    ];
    roots.sort();
    Ok(roots)
}

/// Integer solutions of `(E_u)` for odd `u > 0`.
///
/// Goes through `k = sqrt(u + 1)`: rational roots exist only when `k` is an
/// integer, and then they are `(k+1)/(k-1)` and its reciprocal.
pub fn integer_solutions_eu(u: &ExactInteger) -> Result<Vec<ExactRational>> {
    if !u.is_positive() || u.is_even() {
        return Err(Error::NotOddPositive(u.clone()));
    }
    let shifted = u + 1;
    let k = integer_sqrt(&shifted)?;
    if &k * &k != shifted {
        return Ok(Vec::new());
    }
    let up = ExactRational::new(&k + 1, &k - 1)?;
    let mut out: Vec<_> = [up.recip().expect("k + 1 > 0"), up]
        .into_iter()
        .filter(ExactRational::is_integer)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Successive doublings of an angle, each refolded into `[0, 1/2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingChain {
    angles: Vec<ReducedAngle>,
}

impl DoublingChain {
    pub fn angles(&self) -> &[ReducedAngle] {
        &self.angles
    }

    pub fn values(&self) -> Vec<ExactRational> {
        self.angles.iter().map(|a| a.value().clone()).collect()
    }

    pub fn last(&self) -> &ReducedAngle {
        self.angles.last().expect("chains are never empty")
    }
}

pub fn double_for_tan(angle: &ReducedAngle) -> ReducedAngle {
    reduce_for_tan(&(ExactRational::from_integer(2) * angle.value()))
}

/// Doubles `start` until its denominator reaches `stop_den`.
pub fn doubling_chain(start: &ReducedAngle, stop_den: &ExactInteger) -> Result<DoublingChain> {
    let bad = || Error::BadChainTarget {
        from: start.n().clone(),
        to: stop_den.clone(),
    };
    if !stop_den.is_positive() {
        return Err(bad());
    }
    let (quotient, rem) = start.n().div_rem(stop_den);
    if !rem.is_zero() || quotient.is_zero() || !(&quotient & (&quotient - 1u32)).is_zero() {
        return Err(bad());
    }
    let steps = quotient.trailing_zeros().unwrap_or(0);
    let mut angles = vec![start.clone()];
    for _ in 0..steps {
        let next = double_for_tan(angles.last().expect("nonempty"));
        angles.push(next);
    }
    debug_assert_eq!(angles.last().map(|a| a.n()), Some(stop_den));
    Ok(DoublingChain { angles })
}
