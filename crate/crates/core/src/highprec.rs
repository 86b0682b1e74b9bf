//! Certified enclosures of `tan²(rπ)`, `tan(rπ)` and `cos(rπ)` as intervals
//! with exact rational endpoints.
//!
//! Internally everything runs in fixed-point ball arithmetic: a midpoint and
//! a radius, both integers scaled by `2^-prec`. Every rounding step widens the
//! radius, so the true value always lies inside the ball. The final ball is
//! converted to a rational interval, rounded outward onto a dyadic grid and
//! padded so that enclosures at increasing precision are nested.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::angle::{reduce_for_cos, reduce_for_tan, ReducedAngle, Sign};
use crate::classifier::{TrigFunction, TrigVerdict};
use crate::error::{Error, Result};
use crate::exact::ExactRational;
use crate::polynomial::IntPolynomial;

/// Precision ceiling for any refinement loop in this module.
pub const MAX_BITS: u32 = 4096;

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: ExactRational,
    hi: ExactRational,
}

impl RatInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: ExactRational, hi: ExactRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: ExactRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.hi
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        &(&self.lo + &self.hi) / &ExactRational::from_integer(2)
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn add_scalar(&self, x: &ExactRational) -> RatInterval {
        RatInterval::new(&self.lo + x, &self.hi + x)
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        RatInterval::new(lo, hi)
    }

    pub fn square(&self) -> RatInterval {
        let a = self.lo.square();
        let b = self.hi.square();
        let hi = std::cmp::max(a.clone(), b.clone());
        if self.contains(&ExactRational::zero()) {
            RatInterval::new(ExactRational::zero(), hi)
        } else {
            RatInterval::new(std::cmp::min(a, b), hi)
        }
    }

    /// `None` when the interval contains zero.
    pub fn recip(&self) -> Option<RatInterval> {
        if self.contains(&ExactRational::zero()) {
            return None;
        }
        Some(RatInterval::new(self.hi.recip()?, self.lo.recip()?))
    }

    /// Interval Horner evaluation of `p` over this interval.
    pub fn eval_polynomial(&self, p: &IntPolynomial) -> RatInterval {
        let mut acc = RatInterval::point(ExactRational::zero());
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add_scalar(&ExactRational::from_integer(c.clone()));
        }
        acc
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

/// `2^-k` as an exact rational.
pub fn pow2_neg(k: u32) -> ExactRational {
    ExactRational::new(BigInt::one(), BigInt::one() << k).expect("nonzero")
}

/// Fixed-point ball `[mid - rad, mid + rad] · 2^-prec`.
#[derive(Clone, Debug)]
struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl Ball {
    fn exact_int(value: i64, prec: u32) -> Ball {
        Ball {
            mid: BigInt::from(value) << prec,
            rad: BigInt::zero(),
            prec,
        }
    }

    fn add(&self, other: &Ball) -> Ball {
        Ball {
            mid: &self.mid + &other.mid,
            rad: &self.rad + &other.rad,
            prec: self.prec,
        }
    }

    fn sub(&self, other: &Ball) -> Ball {
        Ball {
            mid: &self.mid - &other.mid,
            rad: &self.rad + &other.rad,
            prec: self.prec,
        }
    }

    fn mul(&self, other: &Ball) -> Ball {
        let mid = (&self.mid * &other.mid) >> self.prec;
        let spread = self.mid.abs() * &other.rad + other.mid.abs() * &self.rad + &self.rad * &other.rad;
        Ball {
            mid,
            // +2 covers the truncation of both the midpoint and the radius.
            rad: (spread >> self.prec) + 2,
            prec: self.prec,
        }
    }

    fn mul_int(&self, k: &BigInt) -> Ball {
        Ball {
            mid: &self.mid * k,
            rad: &self.rad * k.abs(),
            prec: self.prec,
        }
    }

    /// Division by a positive integer.
    fn div_int(&self, k: &BigInt) -> Ball {
        Ball {
            mid: self.mid.div_floor(k),
            rad: self.rad.div_floor(k) + 2,
            prec: self.prec,
        }
    }

    /// Quotient by a ball bounded away from zero; `None` if `other` may
    /// contain zero.
    fn div(&self, other: &Ball) -> Option<Ball> {
        let ym = other.mid.abs();
        if ym <= other.rad {
            return None;
        }
        let mid = (&self.mid << self.prec).div_floor(&other.mid);
        // |x/y - xm/ym| <= (|xm|·yr + |ym|·xr) / (|ym|·(|ym| - yr))
        let num = (self.mid.abs() * &other.rad + &ym * &self.rad) << self.prec;
        let den = &ym * (&ym - &other.rad);
        let rad = num.div_ceil(&den) + 2;
        Some(Ball {
            mid,
            rad,
            prec: self.prec,
        })
    }

    fn square(&self) -> Ball {
        self.mul(self)
    }

    fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    fn upper_abs(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    /// Integer endpoints of the ball rounded outward onto `2^-grid`.
    fn round_out(&self, grid: u32) -> (BigInt, BigInt) {
        let shift = self.prec - grid;
        let lo = (&self.mid - &self.rad) >> shift;
        let hi = -((-(&self.mid + &self.rad)) >> shift);
        (lo, hi)
    }

    /// Coarsens to a lower precision, keeping the enclosure.
    fn truncate(&self, prec: u32) -> Ball {
        let shift = self.prec - prec;
        Ball {
            mid: &self.mid >> shift,
            rad: (&self.rad >> shift) + 2,
            prec,
        }
    }
}

/// `atan(1/x)` at scale `2^prec` from the alternating Taylor series.
fn atan_recip(x: u32, prec: u32) -> Ball {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << prec) / &x;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    // Each of the k terms is off by at most ~2.05 ulp from flooring, and the
    // dropped tail is bounded by the first omitted term (< 2.05 ulp).
    Ball {
        mid: sum,
        rad: BigInt::from(3 * k + 3),
        prec,
    }
}

/// π at scale `2^prec` via Machin's formula. Computed at `prec` rounded up
/// to a multiple of 256, cached, and truncated.
fn pi_ball(prec: u32) -> Ball {
    static CACHE: OnceLock<RwLock<HashMap<u32, Ball>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let stored = prec.div_ceil(256) * 256;
    if let Some(pi) = cache.read().expect("pi cache poisoned").get(&stored) {
        return pi.truncate(prec);
    }
    let a = atan_recip(5, stored).mul_int(&BigInt::from(16));
    let b = atan_recip(239, stored).mul_int(&BigInt::from(4));
    let pi = a.sub(&b);
    let truncated = pi.truncate(prec);
    cache.write().expect("pi cache poisoned").entry(stored).or_insert(pi);
    truncated
}

/// `(d/n)·π` as a ball; `fraction` must be nonnegative.
fn angle_ball(fraction: &ExactRational, prec: u32) -> Ball {
    pi_ball(prec)
        .mul_int(fraction.numer())
        .div_int(fraction.denom())
}

/// Sums an alternating Taylor series whose `k`-th term is
/// `first · (-x2)^k / Π step_den(j)`, stopping once the terms are down to
/// rounding noise and decreasing; the remainder bound is folded into the radius.
fn alternating_series(first: Ball, x2: &Ball, step_den: impl Fn(u64) -> u64) -> Ball {
    // Each ball product carries at least 2 ulp of rounding radius.
    let noise = BigInt::from(8);
    let x2_bound = x2.upper_abs();
    let mut sum = first.clone();
    let mut term = first;
    let mut k: u64 = 1;
    loop {
        let den = step_den(k);
        term = term.mul(x2).div_int(&BigInt::from(den));
        sum = if k % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        // Terms shrink from here on once x2 < next step denominator.
        let shrinking = (x2_bound.clone() >> x2.prec) < BigInt::from(step_den(k + 1));
        if shrinking && term.upper_abs() <= noise {
            sum.rad += term.upper_abs();
            return sum;
        }
        k += 1;
    }
}

fn sin_cos_balls(fraction: &ExactRational, prec: u32) -> (Ball, Ball) {
    let theta = angle_ball(fraction, prec);
    let x2 = theta.mul(&theta);
    let sin = alternating_series(theta, &x2, |k| (2 * k) * (2 * k + 1));
    let cos = alternating_series(Ball::exact_int(1, prec), &x2, |k| (2 * k - 1) * (2 * k));
    (sin, cos)
}

fn check_bits(bits: u32) -> Result<()> {
    if bits < 8 {
        return Err(Error::PrecisionTooLow(bits));
    }
    Ok(())
}

/// Runs `raw` at increasing working precision until the outward-rounded
/// enclosure is narrower than `2^-(bits+3)`, then pads by `2^-(bits+1)`.
///
/// The padding makes the result at any higher `bits` sit inside the result
/// at a lower `bits`: the pad shrinks by at least `2^-(b1+2)` while the raw
/// width at `b2 > b1` is below `2^-(b2+3)`.
fn enclose(bits: u32, start_prec: u32, raw: impl Fn(u32) -> Option<Ball>) -> RatInterval {
    let grid = bits + 8;
    let mut prec = start_prec.max(bits + 16);
    loop {
        if let Some(found) = raw(prec) {
            let (lo, hi) = found.round_out(grid);
            // Width target 2^-(bits+3) and pad 2^-(bits+1), in grid units.
            if &hi - &lo <= BigInt::from(1 << 5) {
                let pad = BigInt::from(1 << 7);
                return RatInterval::new(
                    ExactRational::dyadic(lo - &pad, grid),
                    ExactRational::dyadic(hi + pad, grid),
                );
            }
        }
        assert!(prec <= 64 * MAX_BITS, "enclosure failed to converge");
        prec += std::cmp::max(32, prec / 2);
    }
}

fn size_hint(angle: &ExactRational) -> u32 {
    angle.denom().bits() as u32
}

fn tan_squared_raw(fraction: &ExactRational, prec: u32) -> Option<Ball> {
    let (sin, cos) = sin_cos_balls(fraction, prec);
    sin.square().div(&cos.square())
}

/// Enclosure of `tan²(d/n · π)` with width at most `2^(1-bits)`.
pub fn eval_tan_squared(angle: &ReducedAngle, bits: u32) -> Result<RatInterval> {
    check_bits(bits)?;
    let folded = reduce_for_tan(angle.value());
    if folded.is_tan_pole() {
        return Err(Error::Pole(angle.value().clone()));
    }
    let fraction = folded.value().clone();
    let hint = bits + 24 + 4 * size_hint(&fraction);
    Ok(enclose(bits, hint, |prec| tan_squared_raw(&fraction, prec)))
}

/// Enclosure of the signed `tan(rπ)`, including the sign carried by the
/// reduced angle.
pub fn eval_tan(angle: &ReducedAngle, bits: u32) -> Result<RatInterval> {
    check_bits(bits)?;
    let folded = reduce_for_tan(angle.value());
    if folded.is_tan_pole() {
        return Err(Error::Pole(angle.value().clone()));
    }
    let fraction = folded.value().clone();
    let hint = bits + 24 + 2 * size_hint(&fraction);
    let raw = enclose(bits, hint, |prec| {
        let (sin, cos) = sin_cos_balls(&fraction, prec);
        sin.div(&cos)
    });
    let flip = (folded.sign() == Sign::Negative) != (angle.sign() == Sign::Negative);
    Ok(if flip { raw.neg() } else { raw })
}

/// `cos(x·π)` for `x` in `[0, 1]` as `(x', negate)` with `x'` in `[0, 1/2]`,
/// using `cos((1 - x)π) = -cos(xπ)`.
fn fold_for_cos(angle: &ReducedAngle) -> (ExactRational, bool) {
    let folded = reduce_for_cos(angle.value());
    if folded.value() > &ExactRational::frac(1, 2) {
        (ExactRational::one() - folded.value(), true)
    } else {
        (folded.value().clone(), false)
    }
}

/// Enclosure of `cos(d/n · π)` with width at most `2^(1-bits)`.
pub fn eval_cos(angle: &ReducedAngle, bits: u32) -> Result<RatInterval> {
    check_bits(bits)?;
    let (fraction, negate) = fold_for_cos(angle);
    Ok(enclose(bits, bits + 24, |prec| {
        let (_, cos) = sin_cos_balls(&fraction, prec);
        Some(if negate { cos.neg() } else { cos })
    }))
}

/// Enclosure of `cos²(d/n · π)` with width at most `2^(1-bits)`.
pub fn eval_cos_squared(angle: &ReducedAngle, bits: u32) -> Result<RatInterval> {
    check_bits(bits)?;
    let (fraction, _) = fold_for_cos(angle);
    Ok(enclose(bits, bits + 24, |prec| Some(sin_cos_balls(&fraction, prec).1.square())))
}

/// Enclosure of `f(rπ)` for any of the four functions.
pub fn eval_function(r: &ExactRational, function: TrigFunction, bits: u32) -> Result<RatInterval> {
    match function {
        TrigFunction::TanSquared => eval_tan_squared(&reduce_for_tan(r), bits),
        TrigFunction::Tan => eval_tan(&reduce_for_tan(r), bits),
        TrigFunction::Cos => eval_cos(&reduce_for_cos(r), bits),
        TrigFunction::CosSquared => eval_cos_squared(&reduce_for_cos(r), bits),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrosscheckFailure {
    #[error("{function}({r}·π) is enclosed by {interval:?}, which misses {value}")]
    ValueOutside {
        r: ExactRational,
        function: TrigFunction,
        value: ExactRational,
        interval: RatInterval,
    },
    #[error("{function}({r}·π) has a pole verdict but the angle is not a pole")]
    NotAPole { r: ExactRational, function: TrigFunction },
    #[error("{function}({r}·π) is a pole but the verdict says {verdict}")]
    UnexpectedPole {
        r: ExactRational,
        function: TrigFunction,
        verdict: TrigVerdict,
    },
    #[error("{function}({r}·π) could not be separated from {value} within {MAX_BITS} bits")]
    NotSeparated {
        r: ExactRational,
        function: TrigFunction,
        value: ExactRational,
    },
}

/// Numerically confirms a verdict: exact values must lie in the enclosure,
/// poles must be exact poles, and irrational values must be separated from
/// every rational value the function can take.
// Failures are rare and carry the evidence; not worth boxing.
#[allow(clippy::result_large_err)]
pub fn crosscheck(
    r: &ExactRational,
    function: TrigFunction,
    verdict: &TrigVerdict,
    bits: u32,
) -> std::result::Result<(), CrosscheckFailure> {
    let has_pole = matches!(function, TrigFunction::TanSquared | TrigFunction::Tan);
    let is_pole = has_pole && reduce_for_tan(r).is_tan_pole();
    match verdict {
        TrigVerdict::Pole => {
            if is_pole {
                Ok(())
            } else {
                Err(CrosscheckFailure::NotAPole {
                    r: r.clone(),
                    function,
                })
            }
        }
        _ if is_pole => Err(CrosscheckFailure::UnexpectedPole {
            r: r.clone(),
            function,
            verdict: verdict.clone(),
        }),
        TrigVerdict::Exact(value) => {
            let interval = eval_function(r, function, bits.max(8)).expect("not a pole");
            if interval.contains(value) {
                Ok(())
            } else {
                Err(CrosscheckFailure::ValueOutside {
                    r: r.clone(),
                    function,
                    value: value.clone(),
                    interval,
                })
            }
        }
        TrigVerdict::Irrational => {
            let mut pending = function.exceptional_values();
            let mut b = bits.max(8);
            loop {
                let interval = eval_function(r, function, b).expect("not a pole");
                pending.retain(|v| interval.contains(v));
                if pending.is_empty() {
                    return Ok(());
                }
                if b >= MAX_BITS {
                    return Err(CrosscheckFailure::NotSeparated {
                        r: r.clone(),
                        function,
                        value: pending.swap_remove(0),
                    });
                }
                b = (2 * b).min(MAX_BITS);
            }
        }
    }
}

fn floor_scaled(x: &ExactRational, scale_bits: u32) -> BigInt {
    (x * &ExactRational::from_integer(BigInt::one() << scale_bits)).floor()
}

/// Interval Horner evaluation of `p` over `x` in fixed point at scale
/// `2^-scale_bits`, rounding outward after every product. Encloses the exact
/// image like [`RatInterval::eval_polynomial`] but without rational gcds.
pub fn eval_polynomial_fixed(p: &IntPolynomial, x: &RatInterval, scale_bits: u32) -> RatInterval {
    let x_lo = floor_scaled(x.lo(), scale_bits);
    let x_hi = -floor_scaled(&-x.hi(), scale_bits);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for c in p.coeffs().iter().rev() {
        let products = [&lo * &x_lo, &lo * &x_hi, &hi * &x_lo, &hi * &x_hi];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        let shifted = c << scale_bits;
        lo = (min >> scale_bits) + &shifted;
        hi = -((-max) >> scale_bits) + shifted;
    }
    let den = BigInt::one() << scale_bits;
    RatInterval::new(
        ExactRational::new(lo, den.clone()).expect("nonzero"),
        ExactRational::new(hi, den).expect("nonzero"),
    )
}

/// Interval image of `q_poly` over an enclosure of `tan²(angle)`, refined
/// until the image is narrower than `2^-target_bits`. Returns the image and
/// the input precision that achieved it.
pub fn residual(
    q_poly: &IntPolynomial,
    angle: &ReducedAngle,
    target_bits: u32,
) -> Result<(RatInterval, u32)> {
    let target = pow2_neg(target_bits);
    let mut bits = target_bits.max(8);
    loop {
        let image = eval_polynomial_fixed(q_poly, &eval_tan_squared(angle, bits)?, bits + 16);
        if image.width() < target || bits >= MAX_BITS {
            return Ok((image, bits));
        }
        bits = (2 * bits).min(MAX_BITS);
    }
}
