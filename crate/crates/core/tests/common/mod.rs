//! Strategies and property checks shared by the property and acceptance suites.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use cdl::moments::{diff_transform, hausdorff_test, MomentSeq, Scalar};
use cdl::oracle::{gram_diagonal, Phase};
use cdl::scalar::{int, Poly, Rat};
use cdl::wco::{construct_2isometry, dual_moment_fiber0, dual_weights, h_of, SquaredWeights, TailRule};

pub fn rat_in(num_max: i64, den_max: i64) -> impl Strategy<Value = Rat> {
    (-num_max..=num_max, 1..=den_max).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

pub fn nonneg_rat(num_max: i64, den_max: i64) -> impl Strategy<Value = Rat> {
    (0..=num_max, 1..=den_max).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

pub fn pos_rat(num_max: i64, den_max: i64) -> impl Strategy<Value = Rat> {
    (1..=num_max, 1..=den_max).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

/// Point of `[0, 1]` with denominator at most `den_max`.
pub fn unit_rat(den_max: i64) -> impl Strategy<Value = Rat> {
    (1..=den_max)
        .prop_flat_map(|d| (0..=d, Just(d)))
        .prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

/// Polynomial of exact degree `0..=6`.
pub fn poly_deg6() -> impl Strategy<Value = Poly> {
    prop::collection::vec(rat_in(9, 5), 1..=7)
        .prop_flat_map(|coeffs| (Just(coeffs), pos_rat(9, 5), any::<bool>()))
        .prop_map(|(mut coeffs, lead, neg)| {
            let last = coeffs.len() - 1;
            coeffs[last] = if neg { -lead } else { lead };
            Poly::new(coeffs)
        })
}

/// `(atom, mass)` pairs: at most 5 atoms in `[0, 1]`, positive masses.
pub fn atomic_measure() -> impl Strategy<Value = Vec<(Rat, Rat)>> {
    prop::collection::vec((unit_rat(12), pos_rat(9, 7)), 1..=5)
}

pub fn measure_moments(measure: &[(Rat, Rat)], last: usize) -> MomentSeq {
    let values = (0..=last)
        .map(|n| {
            measure.iter().fold(Rat::zero(), |acc, (a, c)| acc + c * num_traits::pow(a.clone(), n))
        })
        .collect();
    MomentSeq::Exact(values)
}

/// Weights bounded from below: `alpha > 0` and `sq(n) >= c > 0` for `n >= 2`.
pub fn bounded_below_weights() -> impl Strategy<Value = SquaredWeights> {
    let tail = prop_oneof![
        pos_rat(7, 4).prop_map(TailRule::Constant),
        (0..=12i64, 1..=6i64)
            .prop_map(|(n, d)| TailRule::Xi { w2sq: Rat::one() + Rat::new(n.into(), d.into()) }),
        (0..=12i64, 1..=6i64)
            .prop_map(|(n, d)| TailRule::InverseXi { w2sq: Rat::one() + Rat::new(n.into(), d.into()) }),
    ];
    (nonneg_rat(8, 5), pos_rat(8, 5), prop::collection::vec(pos_rat(8, 5), 0..=3), tail, any::<bool>())
        .prop_map(|(s0, s1, rest, tail, swap)| {
            let (s0, s1) = if swap { (s1, s0) } else { (s0, s1) };
            let mut head = vec![s0, s1];
            head.extend(rest);
            SquaredWeights::new(head, tail).expect("valid by construction")
        })
}

/// 2-isometric weights from `construct_2isometry`: `sq(0) = 1 - u`,
/// `sq(1) = u + v` with `u in [0, 1)`, `v >= 0`.
pub fn two_isometric_weights() -> impl Strategy<Value = SquaredWeights> {
    (1..=8i64)
        .prop_flat_map(|d| (0..d, Just(d), nonneg_rat(12, 5)))
        .prop_filter_map("sq(1) = 0 off the isometric branch", |(n, d, v)| {
            let u = Rat::new(n.into(), d.into());
            let sq1 = &u + v;
            construct_2isometry(Rat::one() - u, sq1).ok()
        })
}

pub fn check_annihilation(p: &Poly) -> Result<(), TestCaseError> {
    let d = p.degree().unwrap_or(0);
    let last = d + 3;
    let seq = MomentSeq::Exact((0..=last).map(|n| p.eval(&int(n as i64))).collect());
    for m in d + 1..=d + 3 {
        let v = diff_transform(&seq, m, 0).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(v, Scalar::Exact(Rat::zero()), "degree {} order {}", d, m);
    }
    Ok(())
}

pub fn check_atomic_soundness(measure: &[(Rat, Rat)]) -> Result<(), TestCaseError> {
    let seq = measure_moments(measure, 10);
    for depth in 1..=10 {
        let v = hausdorff_test(&seq, depth).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(v.passed(), "depth {}: {}", depth, v);
    }
    Ok(())
}

pub fn check_dual_involution_and_reciprocity(w: &SquaredWeights) -> Result<(), TestCaseError> {
    let d = dual_weights(w).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let dd = dual_weights(&d).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&dd, w);
    prop_assert_eq!(dd.prefix(40), w.prefix(40));
    for n in 0..=30 {
        prop_assert!((h_of(&d, n) * h_of(w, n)).is_one(), "n = {}", n);
    }
    Ok(())
}

pub fn check_oracle_closed_form(w: &SquaredWeights) -> Result<(), TestCaseError> {
    let d = dual_weights(w).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for n in 0..=10 {
        let closed = dual_moment_fiber0(w, n).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let oracle =
            gram_diagonal(&d, 0, n, Phase::Nonnegative).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(closed, oracle, "n = {}", n);
    }
    Ok(())
}
