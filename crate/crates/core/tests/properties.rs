//! Property tests for exact arithmetic, the polynomial family, the
//! double-angle map and the classifier.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use trig_rational::angle::{
    double_angle_forward, doubling_chain, integer_solutions_eu, invert_double_angle, odd_part, reduce_for_tan,
};
use trig_rational::exact::{binomial, divisors, integer_sqrt};
use trig_rational::polynomial::{build_p, build_q, eval_at_rational, rational_roots};
use trig_rational::{ExactRational, IntPolynomial, TrigFunction, TrigVerdict};

fn q(a: i64, b: i64) -> ExactRational {
    ExactRational::frac(a, b)
}

fn rational() -> impl Strategy<Value = ExactRational> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(a, b)| q(a, b))
}

fn nonnegative_rational() -> impl Strategy<Value = ExactRational> {
    (0i64..10_000, 1i64..5_000).prop_map(|(a, b)| q(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rationals_are_canonical(a in any::<i64>(), b in any::<i64>().prop_filter("nonzero", |b| *b != 0)) {
        let r = ExactRational::new(a.into(), b.into()).unwrap();
        prop_assert!(r.denom().is_positive());
        prop_assert!(r.numer().abs().gcd(r.denom()).is_one());
        prop_assert_eq!(r, ExactRational::new(BigInt::from(a) * 7, BigInt::from(b) * 7).unwrap());
    }

    #[test]
    fn divisors_pair_up(n in 1u64..2_000_000) {
        let big = BigInt::from(n);
        let ds = divisors(&big).unwrap();
        prop_assert!(ds.windows(2).all(|w| w[0] < w[1]));
        for (i, d) in ds.iter().enumerate() {
            prop_assert!((&big % d).is_zero());
            prop_assert_eq!(d * &ds[ds.len() - 1 - i], big.clone());
        }
    }

    #[test]
    fn double_angle_round_trip(t in nonnegative_rational().prop_filter("pole", |t| *t != ExactRational::one())) {
        let d = double_angle_forward(&t).unwrap();
        prop_assert!(invert_double_angle(&d).unwrap().contains(&t));
    }

    #[test]
    fn preimages_are_reciprocal(t in nonnegative_rational().prop_filter("pole", |t| *t != ExactRational::one())) {
        let pre = invert_double_angle(&double_angle_forward(&t).unwrap()).unwrap();
        if let [x1, x2] = pre.as_slice() {
            prop_assert_eq!(x1 * x2, ExactRational::one());
        }
    }

    #[test]
    fn tan_reduction_has_period_one(r in rational()) {
        prop_assert_eq!(reduce_for_tan(&r), reduce_for_tan(&(&r + &ExactRational::one())));
    }

    #[test]
    fn tan_squared_symmetry(r in rational()) {
        let f = TrigFunction::TanSquared;
        prop_assert_eq!(f.classify(&r), f.classify(&-&r));
        prop_assert_eq!(f.classify(&r), f.classify(&(&r + &ExactRational::one())));
    }

    #[test]
    fn rational_roots_match_brute_force(coeffs in prop::collection::vec(-30i64..=30, 1..=6)) {
        let p = IntPolynomial::from_i64(&coeffs);
        prop_assume!(!p.is_zero());
        let mut oracle = BTreeSet::new();
        for b in 1..=50 {
            for a in -50..=50 {
                let x = q(a, b);
                if eval_at_rational(&p, &x).is_zero() {
                    oracle.insert(x);
                }
            }
        }
        let roots = rational_roots(&p).unwrap();
        prop_assert_eq!(roots.into_iter().collect::<BTreeSet<_>>(), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn integer_sqrt_brackets(limbs in prop::collection::vec(any::<u64>(), 1..=4)) {
        let x = BigInt::from(BigUint::from_slice(
            &limbs.iter().flat_map(|l| [*l as u32, (*l >> 32) as u32]).collect::<Vec<_>>(),
        ));
        let r = integer_sqrt(&x).unwrap();
        prop_assert!(&r * &r <= x);
        let next = &r + 1;
        prop_assert!(x < &next * &next);
    }
}

#[test]
fn pascal_identity_up_to_64() {
    for n in 1..=64i64 {
        for k in 1..n {
            let lhs = binomial(&n.into(), &k.into()).unwrap();
            let rhs = binomial(&(n - 1).into(), &(k - 1).into()).unwrap() + binomial(&(n - 1).into(), &k.into()).unwrap();
            assert_eq!(lhs, rhs, "C({n}, {k})");
        }
        assert!(binomial(&n.into(), &0.into()).unwrap().is_one());
        assert!(binomial(&n.into(), &n.into()).unwrap().is_one());
    }
}

#[test]
fn q_family_structure() {
    for n in (3..=999i64).step_by(2) {
        let p = build_q(&n.into()).unwrap();
        assert!(p.is_monic(), "Q_{n}");
        assert_eq!(p.constant().abs(), BigInt::from(n));
        if n <= 99 {
            assert_eq!(p.compose_square(), build_p(&n.into()).unwrap());
        }
        let m = ((n - 1) / 2) as usize;
        assert_eq!(-p.coeff(m - 1), BigInt::from(n * (n - 1) / 2));
    }
}

#[test]
fn rational_roots_of_q_are_three_or_nothing() {
    for n in (3..=297i64).step_by(2) {
        let roots = rational_roots(&build_q(&n.into()).unwrap()).unwrap();
        assert_eq!(roots, if n % 3 == 0 { vec![q(3, 1)] } else { vec![] }, "Q_{n}");
    }
}

#[test]
fn integer_preimages_only_at_three() {
    assert_eq!(integer_solutions_eu(&3.into()).unwrap(), vec![q(3, 1)]);
    for u in (5..=9999i64).step_by(2) {
        assert!(integer_solutions_eu(&u.into()).unwrap().is_empty(), "u = {u}");
    }
}

#[test]
fn chains_carry_exact_values_forward() {
    let f = TrigFunction::TanSquared;
    for n in 1..=192i64 {
        for d in (0..n).filter(|d| d.gcd(&n) == 1) {
            let start = reduce_for_tan(&q(d, n));
            let (_, odd) = odd_part(start.n()).unwrap();
            let chain = doubling_chain(&start, &odd).unwrap();
            for pair in chain.angles().windows(2) {
                let here = f.classify(pair[0].value());
                let next = f.classify(pair[1].value());
                match (here, next) {
                    (TrigVerdict::Exact(v), next) if v == ExactRational::one() => assert_eq!(next, TrigVerdict::Pole),
                    (TrigVerdict::Exact(v), next) => {
                        assert_eq!(next, TrigVerdict::Exact(double_angle_forward(&v).unwrap()), "{d}/{n}");
                    }
                    _ => {}
                }
            }
        }
    }
}

#[test]
fn derived_classifiers_are_consistent() {
    for n in 1..=200i64 {
        for d in (0..2 * n).filter(|d| d.gcd(&n) == 1) {
            let r = q(d, n);
            let tan2 = TrigFunction::TanSquared.classify(&r);
            let tan = TrigFunction::Tan.classify(&r);
            let cos2 = TrigFunction::CosSquared.classify(&r);
            let cos = TrigFunction::Cos.classify(&r);
            if let TrigVerdict::Exact(c) = &cos {
                assert_eq!(cos2, TrigVerdict::Exact(c.square()), "{r}");
            }
            if let TrigVerdict::Exact(t) = &tan {
                assert_eq!(tan2, TrigVerdict::Exact(t.square()), "{r}");
            }
            assert_eq!(tan == TrigVerdict::Pole, tan2 == TrigVerdict::Pole);
            assert_eq!(tan == TrigVerdict::Pole, r.denom() == &BigInt::from(2));
        }
    }
}
