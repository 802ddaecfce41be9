//! Randomized structural properties of the arithmetic, cochain, and braid
//! layers.

use proptest::prelude::*;

use qv_core::arith::{GroundRing, IntLaurent, LaurentPoly, RingElement};
use qv_core::cochain::{CochainPoly, CoordSystem};
use qv_core::diagram::{BraidLetter, BraidWord};
use qv_core::quandle::AlexanderQuandle;

/// A small pool of ground rings: two fields of characteristic 2, two of
/// characteristic 3, and one non-field quotient.
fn ring_pool() -> Vec<GroundRing> {
    vec![
        GroundRing::new(2, &[1, 1, 1]).unwrap(),
        GroundRing::new(2, &[1, 0, 1, 1]).unwrap(),
        GroundRing::new(3, &[1, 1]).unwrap(),
        GroundRing::new(3, &[1, 0, 1]).unwrap(),
        GroundRing::new(3, &[1, 2, 1]).unwrap(),
    ]
}

fn arb_ring() -> impl Strategy<Value = GroundRing> {
    (0..ring_pool().len()).prop_map(|i| ring_pool().swap_remove(i))
}

fn arb_element(ring: &GroundRing) -> impl Strategy<Value = RingElement> {
    let ring = ring.clone();
    proptest::collection::vec(-20i64..20, ring.m())
        .prop_map(move |coeffs| ring.from_coeffs(&coeffs))
}

fn arb_ring_and_elements(n: usize) -> impl Strategy<Value = (GroundRing, Vec<RingElement>)> {
    arb_ring().prop_flat_map(move |ring| {
        let elems = proptest::collection::vec(arb_element(&ring), n);
        (Just(ring), elems)
    })
}

fn arb_int_laurent() -> impl Strategy<Value = IntLaurent> {
    proptest::collection::vec((-5i64..=5, -9i64..=9), 0..5)
        .prop_map(|pairs| IntLaurent::from_terms(&pairs))
}

fn arb_laurent_poly(p: u64) -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((-4i64..=4, 1i64..(p as i64)), 0..4).prop_map(move |pairs| {
        pairs.iter().fold(LaurentPoly::zero(), |acc, &(e, c)| {
            acc.add(&LaurentPoly::monomial(p, e, c), p)
        })
    })
}

/// Random cochain polynomial with small exponent vectors.
fn arb_cochain(p: u64, nvars: usize) -> impl Strategy<Value = CochainPoly> {
    let term = (
        proptest::collection::vec(0u32..4, nvars),
        arb_laurent_poly(p),
    );
    proptest::collection::vec(term, 0..4).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(CochainPoly::zero(p, nvars, CoordSystem::X), |acc, (k, c)| {
                acc.add(&CochainPoly::monomial(p, CoordSystem::X, &k, c))
            })
    })
}

fn arb_cochain_any_shape() -> impl Strategy<Value = CochainPoly> {
    (prop_oneof![Just(2u64), Just(3)], 1usize..=3)
        .prop_flat_map(|(p, nvars)| arb_cochain(p, nvars))
}

fn arb_braid_word() -> impl Strategy<Value = BraidWord> {
    (2usize..=4).prop_flat_map(|strands| {
        let letter = (1..strands, 0u8..3).prop_map(|(index, kind)| match kind {
            0 => BraidLetter::Positive(index),
            1 => BraidLetter::Negative(index),
            _ => BraidLetter::Singular(index),
        });
        proptest::collection::vec(letter, 0..8)
            .prop_map(move |letters| BraidWord::new(strands, letters).unwrap())
    })
}

proptest! {
    #[test]
    fn ring_operations_satisfy_ring_axioms((ring, e) in arb_ring_and_elements(3)) {
        let (a, b, c) = (&e[0], &e[1], &e[2]);
        prop_assert_eq!(ring.add(a, b), ring.add(b, a));
        prop_assert_eq!(ring.add(&ring.add(a, b), c), ring.add(a, &ring.add(b, c)));
        prop_assert_eq!(ring.mul(a, b), ring.mul(b, a));
        prop_assert_eq!(ring.mul(&ring.mul(a, b), c), ring.mul(a, &ring.mul(b, c)));
        prop_assert_eq!(
            ring.mul(a, &ring.add(b, c)),
            ring.add(&ring.mul(a, b), &ring.mul(a, c))
        );
        prop_assert_eq!(ring.add(a, &ring.zero()), a.clone());
        prop_assert_eq!(ring.mul(a, &ring.one()), a.clone());
        prop_assert!(ring.sub(a, a).is_zero());
        prop_assert_eq!(ring.add(a, &ring.neg(a)), ring.zero());
        let mut fifth = ring.one();
        for _ in 0..5 {
            fifth = ring.mul(&fifth, a);
        }
        prop_assert_eq!(ring.pow(a, 5), fifth);
    }

    #[test]
    fn field_inverses_multiply_to_one(coeffs in proptest::collection::vec(-20i64..20, 3)) {
        // F_27 = F_3[w]/(w^3 - w + 1)
        let ring = GroundRing::new(3, &[1, 0, -1, 1]).unwrap();
        let a = ring.from_coeffs(&coeffs);
        prop_assume!(!a.is_zero());
        let inv = ring.invert(&a).unwrap();
        prop_assert_eq!(ring.mul(&a, &inv), ring.one());
    }

    #[test]
    fn element_strings_parse_back((ring, e) in arb_ring_and_elements(1)) {
        let text = ring.element_string(&e[0]);
        prop_assert_eq!(ring.parse_element(&text).unwrap(), e[0].clone());
    }

    #[test]
    fn normalized_lifts_reduce_back_and_vanish_at_one((ring, e) in arb_ring_and_elements(1)) {
        let lift = ring.normalized_lift(&e[0]).unwrap();
        prop_assert_eq!(ring.reduce_int_laurent(&lift), e[0].clone());
        prop_assert_eq!(lift.eval_at_one().rem_euclid(ring.p() as i64), 0);
    }

    #[test]
    fn int_laurent_display_parses_back(l in arb_int_laurent()) {
        let text = l.to_string();
        prop_assert_eq!(IntLaurent::parse(&text).unwrap(), l);
    }

    #[test]
    fn laurent_polys_form_a_commutative_ring(
        p in prop_oneof![Just(2u64), Just(3), Just(5)],
        seed in proptest::collection::vec((-4i64..=4, 1i64..5), 3..9),
    ) {
        let third = seed.len() / 3;
        let build = |part: &[(i64, i64)]| {
            part.iter().fold(LaurentPoly::zero(), |acc, &(e, c)| {
                acc.add(&LaurentPoly::monomial(p, e, c), p)
            })
        };
        let a = build(&seed[..third]);
        let b = build(&seed[third..2 * third]);
        let c = build(&seed[2 * third..]);
        prop_assert_eq!(a.add(&b, p), b.add(&a, p));
        prop_assert_eq!(a.mul(&b, p), b.mul(&a, p));
        prop_assert_eq!(a.mul(&b.mul(&c, p), p), a.mul(&b, p).mul(&c, p));
        prop_assert_eq!(
            a.mul(&b.add(&c, p), p),
            a.mul(&b, p).add(&a.mul(&c, p), p)
        );
        prop_assert!(a.sub(&a, p).is_zero());
    }

    #[test]
    fn coboundary_squares_to_zero(
        p in prop_oneof![Just(2u64), Just(3)],
        nvars in 1usize..=2,
        seed in proptest::collection::vec((proptest::collection::vec(0u32..4, 2), -4i64..=4, 1i64..3), 0..4),
    ) {
        let f = seed
            .into_iter()
            .fold(CochainPoly::zero(p, nvars, CoordSystem::U), |acc, (k, e, c)| {
                let coeff = LaurentPoly::monomial(p, e, c);
                acc.add(&CochainPoly::monomial(p, CoordSystem::U, &k[..nvars], coeff))
            });
        prop_assert!(f.coboundary().coboundary().is_zero());
    }

    #[test]
    fn coordinate_changes_round_trip(f in arb_cochain_any_shape()) {
        prop_assert_eq!(f.to_coords(CoordSystem::U).to_coords(CoordSystem::X), f.clone());
        prop_assert_eq!(
            f.to_coords(CoordSystem::X).to_coords(CoordSystem::U),
            f.to_coords(CoordSystem::U)
        );
    }

    #[test]
    fn braid_words_display_and_parse_back(word in arb_braid_word()) {
        let text = word.to_string();
        prop_assert_eq!(BraidWord::parse(&text).unwrap(), word);
    }

    #[test]
    fn quandle_axioms_hold_for_random_units(
        coeffs in proptest::collection::vec(-20i64..20, 3),
        triple in proptest::collection::vec(proptest::collection::vec(-20i64..20, 3), 3),
    ) {
        let ring = GroundRing::new(3, &[1, 0, -1, 1]).unwrap();
        let omega = ring.from_coeffs(&coeffs);
        prop_assume!(!omega.is_zero());
        let quandle = AlexanderQuandle::new(ring.clone(), omega).unwrap();
        let x = ring.from_coeffs(&triple[0]);
        let y = ring.from_coeffs(&triple[1]);
        let z = ring.from_coeffs(&triple[2]);
        prop_assert_eq!(quandle.op(&x, &x), x.clone());
        prop_assert_eq!(quandle.unop(&quandle.op(&x, &y), &y), x.clone());
        prop_assert_eq!(quandle.op(&quandle.unop(&x, &y), &y), x.clone());
        prop_assert_eq!(
            quandle.op(&quandle.op(&x, &y), &z),
            quandle.op(&quandle.op(&x, &z), &quandle.op(&y, &z))
        );
    }
}
