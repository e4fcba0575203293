//! Property tests for the serialization surfaces and the filtration laws.

use fir_core::ring::parse_element;
use fir_core::space::{measure, rat, Size, SpaceOracle};
use fir_core::{Alphabet, Domain, RingElement, RingVector, Scalar, Word};
use proptest::prelude::*;

fn ab() -> Alphabet {
    Alphabet::new(2).unwrap()
}

fn arb_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..4, 0..6).prop_map(|codes| {
        let letters = codes.into_iter().map(|c| {
            let l = fir_core::words::Letter::gen(c / 2);
            if c % 2 == 1 {
                l.inv()
            } else {
                l
            }
        });
        Word::reduce(letters)
    })
}

fn arb_element() -> impl Strategy<Value = RingElement> {
    proptest::collection::vec((arb_word(), -4i64..=4), 0..5).prop_map(|terms| {
        let mut e = RingElement::zero(Domain::Rational);
        for (w, c) in terms {
            e = e
                .add(&RingElement::term(Domain::Rational, Domain::Rational.from_integer(c), w))
                .unwrap();
        }
        e
    })
}

proptest! {
    /// The canonical rendering re-parses to the same element.
    #[test]
    fn element_text_round_trips(e in arb_element()) {
        let text = e.to_string();
        let back = parse_element(&text, &ab(), Domain::Rational).unwrap();
        prop_assert_eq!(back, e);
    }

    /// Word multiplication is associative and inverses cancel.
    #[test]
    fn word_group_laws(u in arb_word(), v in arb_word(), w in arb_word()) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        prop_assert_eq!(u.mul(&u.inverse()), Word::identity());
    }

    /// Filtration laws against the tree oracle: differences stay below the
    /// max, products below the sum, and diameters ignore left translation.
    #[test]
    fn filtration_laws(x in arb_element(), y in arb_element(), g in arb_word()) {
        let t = SpaceOracle::tree(ab());
        let size = |e: &RingElement| measure(&RingVector::from_element(e.clone()), &t).unwrap().abs;
        let diff = x.sub(&y).unwrap();
        prop_assert!(size(&diff) <= size(&x).max(size(&y)));
        let prod = x.mul(&y).unwrap();
        match (size(&x), size(&y), size(&prod)) {
            (Size::Fin(a), Size::Fin(b), Size::Fin(p)) => prop_assert!(p <= a + b),
            (_, _, s) => prop_assert!(s.is_neg_inf() || s == Size::Fin(rat(0))),
        }
        let m1 = measure(&RingVector::from_element(x.clone()), &t).unwrap().diam;
        let m2 = measure(&RingVector::from_element(x.translate(&g)), &t).unwrap().diam;
        prop_assert_eq!(m1, m2);
    }

    /// Color keys are invariant under trivial-unit multiplication and come
    /// with an exact witness.
    #[test]
    fn color_keys_are_unit_invariant(x in arb_element(), g in arb_word(), c in 1i64..=5) {
        prop_assume!(!x.is_zero());
        let v = RingVector::from_element(x);
        let scaled = v.translate(&g).scale(&Domain::Rational.from_integer(c));
        let (k1, k2) = (v.color_key().unwrap(), scaled.color_key().unwrap());
        prop_assert_eq!(&k1.representative, &k2.representative);
        let (lambda, w) = k2.unit_from(&k1, &Domain::Rational).unwrap().unwrap();
        prop_assert_eq!(v.translate(&w).scale(&lambda), scaled);
    }
}

#[test]
fn worked_measures() {
    let t = SpaceOracle::tree(ab());
    let m = |s: &str| {
        let e = parse_element(s, &ab(), Domain::Rational).unwrap();
        measure(&RingVector::from_element(e), &t).unwrap()
    };
    let one_a = m("1+a");
    assert_eq!(one_a.abs, Size::Fin(rat(1)));
    assert_eq!(one_a.diam, Size::Fin(rat(1)));
    let b_ba = m("b+ba");
    assert_eq!(b_ba.abs, Size::Fin(rat(2)));
    assert_eq!(b_ba.diam, Size::Fin(rat(1)));
    let zero = m("0");
    assert!(zero.abs.is_neg_inf() && zero.diam.is_neg_inf());
}

#[test]
fn unit_scalars_have_size_zero_and_positive_diameter_elements_do_not() {
    let t = SpaceOracle::tree(ab());
    let e = parse_element("3*ab", &ab(), Domain::Rational).unwrap();
    let meas = measure(&RingVector::from_element(e.clone()), &t).unwrap();
    assert_eq!(meas.diam, Size::Fin(rat(0)));
    assert_eq!(meas.abs, Size::Fin(rat(2)));
    assert_eq!(e.is_unit().unwrap().unwrap().1.to_string(), "ab");
}

#[test]
fn displacement_needs_a_movable_point() {
    // a radius-zero ball holds only the origin, so no nontrivial group
    // element acts within it
    let a1 = Alphabet::new(1).unwrap();
    let oracle = fir_core::space::build_cayley_ball(a1, &[], 0, 100).unwrap();
    assert!(matches!(
        fir_core::space::min_displacement(&oracle, 2),
        Err(fir_core::Error::Empty(_))
    ));
}

#[test]
fn extremal_graph_export_format() {
    use fir_core::extremal::{build_gamma, Family};
    let t = SpaceOracle::tree(ab());
    let q = |s: &str| RingVector::from_element(parse_element(s, &ab(), Domain::Rational).unwrap());
    let fam = Family::from_vectors(Domain::Rational, vec![q("1+a"), q("b+ba"), q("-1-a-b-ba")]).unwrap();
    let g = build_gamma(&fam, rat(0), &t).unwrap();
    let text = g.to_edge_list(&fam);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("vertices 2 mu 0"));
    // vertex annotations: index, color, radius, absolute value
    assert!(text.contains("# 1 0 1/2 2"));
    assert!(text.contains("# 2 1 3/2 2"));
    assert!(text.contains("1 2 ba"));
}

#[test]
fn scalar_domain_separation_is_enforced() {
    let x = parse_element("1+a", &ab(), Domain::Rational).unwrap();
    let y = parse_element("1+a", &ab(), Domain::fp(5).unwrap()).unwrap();
    assert!(x.add(&y).is_err());
    let _ = Scalar::Fp(3);
}
