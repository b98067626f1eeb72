use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use waring::exact_arith::{
    cyclotomic_poly, embed, format_rational, parse_rational, root_of_unity, root_power_sum, CycloScalar,
};
use waring::scalar::Scalar;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A random element of Q(zeta_m) as a short polynomial in zeta_m.
fn arb_cyclo(m: u32) -> impl Strategy<Value = CycloScalar> {
    prop::collection::vec((-6i64..=6, 1i64..=4), 1..6)
        .prop_map(move |cs| CycloScalar::from_poly(m, cs.into_iter().map(|(n, d)| q(n, d)).collect()))
}

fn arb_conductor() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 9, 10, 12])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in arb_conductor().prop_flat_map(|m| (arb_cyclo(m), arb_cyclo(m), arb_cyclo(m)))) {
        prop_assert_eq!((&(&a + &b)) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert_eq!(&a * &inv, CycloScalar::one());
        }
    }

    #[test]
    fn embed_is_a_ring_homomorphism(
        (small, big, x, y) in (arb_conductor(), 1u32..4)
            .prop_flat_map(|(m, f)| (Just(m), Just(m * f), arb_cyclo(m), arb_cyclo(m)))
    ) {
        let ex = embed(small, big, &x).unwrap();
        let ey = embed(small, big, &y).unwrap();
        prop_assert_eq!(embed(small, big, &(&x * &y)).unwrap(), &ex * &ey);
        prop_assert_eq!(embed(small, big, &(&x + &y)).unwrap(), &ex + &ey);
    }

    #[test]
    fn complex_shadow_agrees(m in arb_conductor(), a in prop::collection::vec(-5i64..=5, 1..5), e in 0u32..5) {
        let x = CycloScalar::from_poly(m, a.iter().map(|&v| q(v, 1)).collect());
        let y = x.pow(e) + x.clone();
        let exact = Scalar::to_complex(&y);
        let float = Scalar::to_complex(&x).powu(e) + Scalar::to_complex(&x);
        prop_assert!((exact - float).norm() <= 1e-12 * float.norm().max(1.0));
    }

    #[test]
    fn rational_text_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let v = q(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
    }
}

#[test]
fn roots_of_unity_have_order_m_and_sum_to_zero() {
    for m in 2..=30 {
        let z = root_of_unity(m, 1);
        assert_eq!(z.pow(m), CycloScalar::one(), "zeta_{m}^{m}");
        let sum = (0..m).fold(CycloScalar::zero(), |acc, a| &acc + &z.pow(a));
        assert!(sum.is_zero(), "sum of powers of zeta_{m}");
        assert_eq!(root_power_sum(m, i64::from(m)), CycloScalar::from_integer(i64::from(m)));
        assert!(root_power_sum(m, 1).is_zero());
    }
}

#[test]
fn cyclotomic_polynomials_divide_z_m_minus_one() {
    for m in 1..=40u32 {
        let phi = cyclotomic_poly(m);
        // zeta_m is a root of Phi_m: evaluating in Q(zeta_m) gives zero
        let z = root_of_unity(m, 1);
        let value = phi
            .coeffs
            .iter()
            .enumerate()
            .fold(CycloScalar::zero(), |acc, (k, c)| &acc + &(&CycloScalar::from_rational(BigRational::from_integer(c.clone())) * &z.pow(k as u32)));
        assert!(value.is_zero(), "Phi_{m}(zeta_{m}) != 0");
    }
}

#[test]
fn embedding_needs_a_multiple() {
    assert!(embed(4, 6, &root_of_unity(4, 1)).is_err());
    assert_eq!(embed(3, 6, &root_of_unity(3, 1)).unwrap(), root_of_unity(6, 2));
    assert_eq!(embed(2, 6, &root_of_unity(2, 1)).unwrap(), root_of_unity(6, 3));
}
