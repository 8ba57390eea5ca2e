//! Property tests for the ground ring `Z[u, u^-1, (1-u)^-1]` and the
//! cyclotomic fields it evaluates into.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use turaev::ring::{Cyclotomic, LaurentPoly, LocalSystem, RingElem, Sign};

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..=6, -4i64..=4), 0..5)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(e, c)| (e, c))))
}

fn elem() -> impl Strategy<Value = RingElem> {
    (laurent(), 0u32..=3).prop_map(|(num, denom_pow)| RingElem::new(num, denom_pow))
}

fn sign() -> impl Strategy<Value = Sign> {
    prop::bool::ANY.prop_map(|b| if b { Sign::Plus } else { Sign::Minus })
}

fn cyclotomic(order: u32) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((-5i64..=5, 0i64..=(order as i64 - 1)), 0..5).prop_map(move |terms| {
        let mut acc = Cyclotomic::zero(order);
        for (c, e) in terms {
            let term = Cyclotomic::zeta_pow(order, e).scaled_int(&BigInt::from(c));
            acc = &acc + &term;
        }
        acc
    })
}

proptest! {
    // --- ring axioms -------------------------------------------------------

    #[test]
    fn addition_is_commutative_and_associative(x in elem(), y in elem(), z in elem()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(x in elem(), y in elem(), z in elem()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn multiplication_distributes_over_addition(x in elem(), y in elem(), z in elem()) {
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn negation_is_the_additive_inverse(x in elem()) {
        prop_assert!((&x + &(-&x)).is_zero());
        prop_assert_eq!(&x - &x, RingElem::zero());
    }

    #[test]
    fn one_and_zero_behave(x in elem()) {
        prop_assert_eq!(&x * &RingElem::one(), x.clone());
        prop_assert_eq!(&x + &RingElem::zero(), x.clone());
        prop_assert!((&x * &RingElem::zero()).is_zero());
    }

    // --- canonical form ----------------------------------------------------

    #[test]
    fn canonical_form_clears_shared_prime_factors(x in elem()) {
        if x.denom_pow() > 0 {
            prop_assert!(!x.num().divisible_by_one_minus_u());
        }
        if x.is_zero() {
            prop_assert_eq!(x.denom_pow(), 0);
        }
    }

    #[test]
    fn arithmetic_preserves_the_canonical_form(x in elem(), y in elem()) {
        for v in [&x + &y, &x * &y, &x - &y] {
            if v.denom_pow() > 0 {
                prop_assert!(!v.num().divisible_by_one_minus_u());
            }
        }
    }

    // --- units -------------------------------------------------------------

    #[test]
    fn declared_units_are_recognized_exactly(s in sign(), a in -6i64..=6, b in -4i64..=4) {
        let u = RingElem::unit(s, a, b);
        let parts = u.is_unit().expect("constructed units are units");
        prop_assert_eq!(parts.sign, s);
        prop_assert_eq!(parts.u_exp, a);
        prop_assert_eq!(parts.one_minus_u_exp, b);
    }

    #[test]
    fn unit_products_add_exponents(
        s1 in sign(), a1 in -4i64..=4, b1 in -3i64..=3,
        s2 in sign(), a2 in -4i64..=4, b2 in -3i64..=3,
    ) {
        let prod = &RingElem::unit(s1, a1, b1) * &RingElem::unit(s2, a2, b2);
        let parts = prod.is_unit().expect("products of units are units");
        prop_assert_eq!(parts.sign, if s1 == s2 { Sign::Plus } else { Sign::Minus });
        prop_assert_eq!(parts.u_exp, a1 + a2);
        prop_assert_eq!(parts.one_minus_u_exp, b1 + b2);
    }

    #[test]
    fn units_divide_exactly(x in elem(), s in sign(), a in -4i64..=4, b in -3i64..=3) {
        let u = RingElem::unit(s, a, b);
        let q = (&x * &u).div_exact(&u).expect("dividing by a unit always succeeds");
        prop_assert_eq!(q, x);
    }

    // --- text round-trip ---------------------------------------------------

    #[test]
    fn display_then_parse_is_the_identity(x in elem()) {
        let rendered = x.to_string();
        let parsed = RingElem::parse(&rendered).expect("rendered elements parse back");
        prop_assert_eq!(parsed, x);
    }

    #[test]
    fn laurent_display_round_trips(p in laurent()) {
        let parsed = LaurentPoly::parse(&p.to_string()).expect("rendered polynomials parse back");
        prop_assert_eq!(parsed, p);
    }

    // --- evaluation is a ring homomorphism ----------------------------------

    #[test]
    fn cyclotomic_evaluation_respects_the_operations(x in elem(), y in elem()) {
        let rho = LocalSystem::new(5);
        let ex = x.eval_cyclotomic(&rho).unwrap();
        let ey = y.eval_cyclotomic(&rho).unwrap();
        prop_assert_eq!((&x + &y).eval_cyclotomic(&rho).unwrap(), &ex + &ey);
        prop_assert_eq!((&x * &y).eval_cyclotomic(&rho).unwrap(), &ex * &ey);
    }

    #[test]
    fn evaluation_at_composite_orders_agrees_with_the_minimal_polynomial(x in elem()) {
        // order 6: phi(6) = 2, so reduction mod the cyclotomic polynomial is
        // nontrivial; the homomorphism property must survive it
        let rho = LocalSystem::new(6);
        let ex = x.eval_cyclotomic(&rho).unwrap();
        let esq = (&x * &x).eval_cyclotomic(&rho).unwrap();
        prop_assert_eq!(esq, &ex * &ex);
    }

    // --- cyclotomic fields ---------------------------------------------------

    #[test]
    fn cyclotomic_field_axioms_hold(x in cyclotomic(12), y in cyclotomic(12), z in cyclotomic(12)) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn nonzero_cyclotomic_elements_invert(x in cyclotomic(12)) {
        if x.is_zero() {
            prop_assert!(x.inv().is_none());
        } else {
            let inv = x.inv().expect("nonzero elements of a field invert");
            prop_assert_eq!(&x * &inv, Cyclotomic::one(12));
        }
    }

    #[test]
    fn zeta_powers_multiply_by_exponent_addition(i in -20i64..=20, j in -20i64..=20) {
        let prod = &Cyclotomic::zeta_pow(7, i) * &Cyclotomic::zeta_pow(7, j);
        prop_assert_eq!(prod, Cyclotomic::zeta_pow(7, i + j));
    }

    #[test]
    fn rational_scaling_matches_repeated_addition(x in cyclotomic(5), k in 0i64..=4) {
        let mut acc = Cyclotomic::zero(5);
        for _ in 0..k {
            acc = &acc + &x;
        }
        prop_assert_eq!(x.scaled(&BigRational::from_integer(k.into())), acc);
    }
}

#[test]
fn zero_tests_are_exact() {
    // (1-u)^2 / (1-u)^2 collapses to 1 in canonical form
    let square = &LaurentPoly::one_minus_u() * &LaurentPoly::one_minus_u();
    let x = RingElem::new(square, 2);
    assert!(x.is_one());
    let cancel = &x - &RingElem::one();
    assert!(cancel.is_zero());
    assert!(BigRational::zero().is_zero());
}
