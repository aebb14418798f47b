mod common;

use common::*;
use proptest::prelude::*;

use lattice_ops::algebra::{interpolate, Laurent, Poly};
use lattice_ops::Scalar;

fn laurent() -> impl Strategy<Value = Laurent<Scalar>> {
    (-3i64..=1, prop::collection::vec(rational(), 0..=4))
        .prop_map(|(lo, cs)| Laurent::from_terms(cs.into_iter().enumerate().map(|(i, c)| (lo + i as i64, c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn scalar_ring_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a * c);
    }

    #[test]
    fn poly_ring_axioms(f in poly(6), g in poly(6), h in poly(6)) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Poly::one(), f.clone());
    }

    #[test]
    fn poly_evaluation_is_a_ring_map(f in poly(5), g in poly(5), x in rational()) {
        prop_assert_eq!((&f * &g).eval(&x), f.eval(&x) * g.eval(&x));
        prop_assert_eq!((&f + &g).eval(&x), f.eval(&x) + g.eval(&x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_div_inverts_multiplication(a in poly(6), b in poly(5)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn div_rem_reconstructs(a in poly(8), b in poly(4)) {
        prop_assume!(!b.is_zero());
        let (quot, rem) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&quot * &b) + &rem, a);
        prop_assert!(rem.degree().map_or(true, |d| d < b.degree().unwrap()));
    }

    #[test]
    fn laurent_exact_div_inverts_multiplication(a in laurent(), b in laurent()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).exact_div(&b).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interpolate_after_evaluate_is_identity(
        f in poly(20),
        extra in 0usize..3,
        nodes in Just((-15i64..=15).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let count = f.degree().unwrap_or(0) + 1 + extra;
        let samples: Vec<_> = nodes[..count]
            .iter()
            .map(|&n| (q(n, 2), f.eval(&q(n, 2))))
            .collect();
        prop_assert_eq!(interpolate(&samples).unwrap(), f);
    }
}
