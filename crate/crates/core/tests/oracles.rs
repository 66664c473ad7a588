use lambda_tree::ground::{brute_force_minima, is_ground_state};
use lambda_tree::model::{classify_region, hamiltonian, LambdaParams};
use lambda_tree::poly::{count_distinct_real_roots, real_roots, Poly};
use lambda_tree::solver::{periodic_quadratic_exact, two_periodic_report, BoltzmannWeights};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn float_quadratic_matches_exact(xn in 1i64..60, yn in 1i64..60, zn in 1i64..60) {
        let (x, y, z) = (rat(xn, 10), rat(yn, 10), rat(zn, 10));
        let exact = periodic_quadratic_exact(x, y, z).unwrap();
        let w = BoltzmannWeights::new(xn as f64 / 10.0, yn as f64 / 10.0, zn as f64 / 10.0).unwrap();
        let float = two_periodic_report(&w).unwrap();
        for (e, f) in exact.iter().zip(float.quad) {
            let e = e.to_f64().unwrap();
            prop_assert!((e - f).abs() <= 1e-11 * e.abs().max(1.0), "{} vs {}", e, f);
        }
    }

    #[test]
    fn isolation_agrees_with_sturm(coeffs in prop::collection::vec(-20i64..20, 2..7)) {
        let exact = Poly::from_integers(&coeffs);
        prop_assume!(exact.degree().unwrap_or(0) >= 1);
        let float = Poly::new(coeffs.iter().map(|&c| c as f64).collect());
        let found = real_roots(&float, 1e-12).len();
        prop_assert_eq!(found, count_distinct_real_roots(&exact, None, None));
    }

    #[test]
    fn brute_force_minima_are_ground_states(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0) {
        let p = LambdaParams::couplings(a, b, c).unwrap();
        let minima = brute_force_minima(&p, 2, 1e-12).unwrap();
        prop_assert!(!minima.is_empty());
        let h0 = hamiltonian(&minima[0], &p);
        for m in &minima {
            prop_assert!((hamiltonian(m, &p) - h0).abs() < 1e-9);
        }
        // a ball-wise minimum exists for every triple, so minima are ball-wise minimal
        prop_assert!(is_ground_state(&minima[0], &p, 1e-9).holds);
        prop_assert!(!classify_region(&p, 1e-12).active_regions.is_empty());
    }
}
