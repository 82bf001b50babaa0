use cmsimplex::ineq::{check_exchange, check_superadditivity, check_weighted_logconvexity, log_coeff, CoeffInstance};
use cmsimplex::WeightVector;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

#[test]
fn integer_arguments_match_exact_multinomials() {
    let cases: [&[u64]; 5] = [&[1, 1], &[2, 3, 1], &[5, 5, 5, 5], &[1, 2, 3, 4, 5], &[7, 0, 3]];
    for gamma in cases {
        let total: u64 = gamma.iter().sum();
        let inst = CoeffInstance::new(WeightVector::new(gamma.iter().map(|&g| g as f64).collect()).unwrap());
        for a in 1..=6u64 {
            let exact = gamma.iter().fold(factorial(a * total), |acc, &g| acc / factorial(a * g));
            if exact > BigUint::from(10u32).pow(60) {
                continue;
            }
            let approx = log_coeff(&inst, a as f64).unwrap().exp();
            let want = exact.to_f64().unwrap();
            assert!(((approx - want) / want).abs() <= 1e-11, "γ = {gamma:?}, a = {a}");
        }
    }
}

fn instance(raw: &[f64]) -> CoeffInstance {
    CoeffInstance::new(WeightVector::new(raw.to_vec()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exchange_is_a_sum_of_two_convexity_margins(
        raw in prop::collection::vec(0.05f64..5.0, 2..6),
        a1 in 0.05f64..10.0,
        a2 in 0.05f64..10.0,
        gap in 0.01f64..10.0,
    ) {
        let inst = instance(&raw);
        let a3 = a1 + gap;
        let (x, y) = (a1, a2 + a3);
        let lambda = (a3 - a1) / (a2 + a3 - a1);
        let w = |l: f64| check_weighted_logconvexity(&inst, &[x, y], &[l, 1.0 - l]).unwrap();
        let e = check_exchange(&inst, a1, a2, a3).unwrap();
        let sum = w(lambda) + w(1.0 - lambda);
        prop_assert!(e >= 0.0);
        prop_assert!((e - sum).abs() <= 1e-12 * e.abs().max(1.0), "{} vs {}", e, sum);
    }

    #[test]
    fn strict_margins_for_separated_arguments(
        raw in prop::collection::vec(0.1f64..5.0, 2..6),
        a in prop::collection::vec(0.1f64..10.0, 2..5),
    ) {
        let inst = instance(&raw);
        let spread = a.iter().cloned().fold(f64::MIN, f64::max) - a.iter().cloned().fold(f64::MAX, f64::min);
        let k = a.len() as f64;
        let lambda = vec![1.0 / k; a.len()];
        let conv = check_weighted_logconvexity(&inst, &a, &lambda).unwrap();
        prop_assert!(conv >= 0.0);
        if spread > 1e-3 {
            prop_assert!(conv > 1e-12, "margin {} at spread {}", conv, spread);
        }
        prop_assert!(check_superadditivity(&inst, &a).unwrap() > 0.0);
    }
}

#[test]
fn exchange_requires_ordered_ends() {
    let inst = instance(&[1.0, 2.0]);
    assert!(check_exchange(&inst, 3.0, 1.0, 2.0).is_err());
    assert_eq!(check_exchange(&inst, 2.0, 1.0, 2.0).unwrap(), 0.0);
}
