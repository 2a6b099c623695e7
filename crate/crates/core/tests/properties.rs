//! Randomized invariants, each checked against an independent oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use convpow::amatrix::AMatrix;
use convpow::arith::{binomial, falling_factorial, rising_factorial, stirling1_unsigned};
use convpow::series::{harmonic_h, harmonic_h_log, harmonic_h_power, li1_power, LogSeries, PowerSeriesInvX};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficients of x(x+1)...(x+k-1), expanded by repeated multiplication.
fn rising_poly(k: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for i in 0..k {
        let mut next = vec![BigInt::zero(); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] += c;
            next[d] += c * BigInt::from(i);
        }
        p = next;
    }
    p
}

fn small_series(order: usize) -> impl Strategy<Value = PowerSeriesInvX> {
    prop::collection::vec((-20i64..20, 1i64..9), order + 1).prop_map(move |v| {
        let coeffs: Vec<_> = v.into_iter().map(|(n, d)| ratio(n, d)).collect();
        PowerSeriesInvX::from_fn(order, |k| coeffs[k].clone())
    })
}

#[test]
fn stirling_expands_rising_factorial() {
    for k in 0..=30 {
        let p = rising_poly(k);
        for (n, c) in p.iter().enumerate() {
            assert_eq!(&stirling1_unsigned(k, n as i64), c, "k={k} n={n}");
        }
        assert!(stirling1_unsigned(k, k as i64 + 1).is_zero());
        assert!(stirling1_unsigned(k, -1).is_zero());
    }
}

#[test]
fn binomial_symmetry() {
    for n in 0..=40usize {
        for k in 0..=n as i64 {
            assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
        }
    }
}

#[test]
fn falling_is_shifted_rising() {
    for x in -5i64..=20 {
        for m in 0..=10usize {
            let shifted = BigInt::from(x - m as i64 + 1);
            assert_eq!(falling_factorial(&BigInt::from(x), m), rising_factorial(&shifted, m));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn harmonic_is_linear(f in small_series(10), g in small_series(10), a in -5i64..5, b in 1i64..5) {
        let alpha = ratio(a, b);
        let beta = ratio(b, 3);
        let combo = f.scale(&alpha).add(&g.scale(&beta)).unwrap();
        let lhs = harmonic_h(&combo);
        let rhs = harmonic_h(&f).scale(&alpha).add(&harmonic_h(&g).scale(&beta)).unwrap();
        for j in 0..=1 {
            prop_assert_eq!(lhs.part(j).coeffs().to_vec(), rhs.part(j).coeffs().to_vec());
        }
    }

    #[test]
    fn harmonic_power_is_iterated_harmonic(g in small_series(8), m in 0usize..=5) {
        let direct = harmonic_h_power(&g, m);
        let mut iterated = LogSeries::from_series(g.clone());
        for _ in 0..m {
            iterated = harmonic_h_log(&iterated).unwrap();
        }
        prop_assert_eq!(direct.degree(), iterated.degree());
        for j in 0..=m {
            prop_assert_eq!(direct.part(j).coeffs().to_vec(), iterated.part(j).coeffs().to_vec(), "j={}", j);
        }
    }

    #[test]
    fn backward_difference_kills_low_orders(g in small_series(12)) {
        let d = g.backward_diff();
        prop_assert!(d.coeff(0).is_zero());
        prop_assert!(d.coeff(1).is_zero());
        let c = PowerSeriesInvX::constant(g.coeff(0), 12);
        prop_assert!(c.backward_diff().is_zero());
    }

    #[test]
    fn li1_power_starts_at_n(n in 0usize..12, order in 12usize..24) {
        let p = li1_power(n, order);
        for k in 0..n {
            prop_assert!(p.coeff(k).is_zero());
        }
        prop_assert!(!p.coeff(n).is_zero());
    }

    #[test]
    fn a_matrix_entries_nonnegative(s in 0usize..14) {
        let a = AMatrix::compute(s);
        prop_assert_eq!(a.get(0, 0), BigInt::one());
        for m in 0..=s {
            for j in 0..=m {
                prop_assert!(a.get(m, j) >= BigInt::zero());
            }
        }
    }
}

#[test]
fn dilog_tail_bounds_order_doubling() {
    for n in [16usize, 32, 64] {
        let short = PowerSeriesInvX::polylog(2, n).eval(3.0).unwrap();
        let long = PowerSeriesInvX::polylog(2, 2 * n).eval(3.0).unwrap();
        assert!(short.reliable);
        assert!(
            (short.value - long.value).abs() <= short.tail_estimate,
            "N={n}: {} vs tail {}",
            (short.value - long.value).abs(),
            short.tail_estimate
        );
    }
}
