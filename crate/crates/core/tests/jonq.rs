use cremona_core::cremaps::{compose, ProjMap};
use cremona_core::exactmath::{Cyclo, RatFunc, UniPoly};
use cremona_core::jonquieres::*;
use cremona_core::Order;
use proptest::prelude::*;

fn poly(c: &[i64]) -> RatFunc {
    RatFunc::from_poly(UniPoly::from_ints(c))
}

fn x() -> RatFunc {
    RatFunc::x()
}

#[test]
fn sigma_squares_to_identity() {
    for g in [
        x(),
        poly(&[-1, 0, 0, 0, 1]),
        RatFunc::new(UniPoly::from_ints(&[-1, 1]), UniPoly::from_ints(&[0, 1])).unwrap(),
    ] {
        let s = JonqElement::sigma(&g).unwrap();
        assert!(compose_j(&s, &s).is_identity());
        assert_eq!(order_j(&s, 10), Order::Finite(2));
    }
}

#[test]
fn small_orders() {
    let r = JonqElement::base_scaling(Cyclo::zeta(3)).unwrap();
    assert_eq!(order_j(&r, 10), Order::Finite(3));
    assert_eq!(order_j(&JonqElement::identity(), 10), Order::Finite(1));
    let t = JonqElement::fibre([RatFunc::one(), x(), RatFunc::zero(), RatFunc::one()]).unwrap();
    assert_eq!(order_j(&t, 50), Order::OverCap);
}

#[test]
fn fourth_root_powers() {
    let a = fourth_root_example();
    let a2 = compose_j(&a, &a);
    assert_eq!(a2, fourth_root_square_printed());
    let a4 = compose_j(&a2, &a2);
    assert_eq!(a4, JonqElement::sigma(&poly(&[-1, 0, 0, 0, 1])).unwrap());
    assert_eq!(order_j(&a, 20), Order::Finite(8));
    let c = det_class(&a4).unwrap();
    assert_eq!(c.radical, UniPoly::from_ints(&[-1, 0, 0, 0, 1]));
    assert!(is_twisting(&a4).unwrap().absolute);
    assert_eq!(
        ramification_data(&a4).unwrap(),
        Ramification { two_k: 4, genus: 1 }
    );
}

#[test]
fn det_class_examples() {
    let s = JonqElement::sigma_ab(&[Cyclo::int(0)], &[Cyclo::int(1)]).unwrap();
    let c = det_class(&s).unwrap();
    assert_eq!(c.radical, UniPoly::from_ints(&[0, -1, 1]));
    assert_eq!(c.constant, Cyclo::int(-1));

    let one = det_class(&JonqElement::sigma(&RatFunc::one()).unwrap()).unwrap();
    assert!(one.radical.is_one());
    assert_eq!(one.constant, Cyclo::int(-1));
    assert_eq!(one.status, ConstantStatus::ResolvedNonsquare);

    let four = det_class(&JonqElement::sigma(&RatFunc::int(4)).unwrap()).unwrap();
    assert!(four.radical.is_one());
    assert_eq!(four.status, ConstantStatus::ResolvedNonsquare);
    assert_eq!(four.same_class(&one), Some(true));
}

#[test]
fn twisting_verdicts() {
    let sx = JonqElement::sigma(&x()).unwrap();
    assert_eq!(
        is_twisting(&sx).unwrap(),
        TwistVerdict {
            absolute: true,
            effective: Some(true)
        }
    );
    let s1 = JonqElement::sigma(&RatFunc::one()).unwrap();
    assert_eq!(
        is_twisting(&s1).unwrap(),
        TwistVerdict {
            absolute: false,
            effective: Some(true)
        }
    );
    assert_eq!(is_twisting_in(&s1, 4).unwrap().effective, Some(false));
    let sx2 = JonqElement::sigma(&poly(&[0, 0, 1])).unwrap();
    assert_eq!(
        is_twisting_in(&sx2, 4).unwrap(),
        TwistVerdict {
            absolute: false,
            effective: Some(false)
        }
    );
    // Q(ζ₅): the constant −1 is a square there, but the test cannot decide it
    let s5 = JonqElement::sigma(&RatFunc::constant(Cyclo::zeta(5))).unwrap();
    assert_eq!(is_twisting(&s5).unwrap().effective, None);

    assert_eq!(
        is_twisting(&JonqElement::identity()),
        Err(JonqError::NotInvolution)
    );
    let r = JonqElement::base_scaling(Cyclo::int(-1)).unwrap();
    assert_eq!(is_twisting(&r), Err(JonqError::NontrivialBase));
}

#[test]
fn ramification_examples() {
    let r = ramification_data(&JonqElement::sigma(&x()).unwrap()).unwrap();
    assert_eq!(r, Ramification { two_k: 2, genus: 0 });
    let g = &(&poly(&[-1, 0, 1]) * &poly(&[-4, 0, 1])) * &poly(&[-9, 0, 1]);
    let r = ramification_data(&JonqElement::sigma(&g).unwrap()).unwrap();
    assert_eq!(r, Ramification { two_k: 6, genus: 2 });
    // squares drop out of the radical
    let g = &poly(&[0, 1]) * &poly(&[1, 1]).pow(2).unwrap();
    let r = ramification_data(&JonqElement::sigma(&g).unwrap()).unwrap();
    assert_eq!(r.two_k, 2);
    let err = ramification_data(&JonqElement::sigma(&poly(&[0, 0, 1])).unwrap());
    assert_eq!(err, Err(JonqError::NotTwisting));
}

#[test]
fn normal_forms() {
    let s = JonqElement::sigma(&x()).unwrap();
    let (f, c) = normalize_involution(&s).unwrap();
    assert_eq!(f.g, x());
    assert!(c.is_identity());

    let g = x();
    let h = poly(&[1, 1]);
    let m = JonqElement::fibre([h.clone(), -&g, RatFunc::one(), -&h]).unwrap();
    let (f, c) = normalize_involution(&m).unwrap();
    assert_eq!(compose_j(&c, &f.element()), compose_j(&m, &c));
    let want = SquareClass::of(&(&g - &(&h * &h)), 1).unwrap();
    let got = det_class(&f.element()).unwrap();
    assert_eq!(got.same_class(&want), Some(true));

    let d = JonqElement::fibre([
        RatFunc::one(),
        RatFunc::zero(),
        RatFunc::zero(),
        RatFunc::int(-1),
    ])
    .unwrap();
    let (f, c) = normalize_involution(&d).unwrap();
    assert_eq!(compose_j(&c, &f.element()), compose_j(&d, &c));
    assert!(det_class(&f.element()).unwrap().is_trivial_absolute());
}

#[test]
fn odd_roots() {
    let r = build_root_odd(1, &x()).unwrap();
    assert_eq!(r.square, JonqElement::sigma(&-&poly(&[0, 0, 1])).unwrap());
    let r = build_root_odd(3, &poly(&[1, 1])).unwrap();
    let gh = &poly(&[1, 0, 0, 1]) * &poly(&[1, 0, 0, -1]);
    assert_eq!(r.power_2n, JonqElement::sigma(&gh).unwrap());
    assert_eq!(order_j(&r.alpha, 20), Order::Finite(12));
    // g(xⁿ) = g(−xⁿ) collapses the matrix
    assert!(matches!(
        build_root_odd(5, &poly(&[2, 0, 1])),
        Err(JonqError::Degenerate(_))
    ));
    assert!(matches!(
        build_root_odd(3, &RatFunc::one()),
        Err(JonqError::Degenerate(_))
    ));
}

#[test]
fn bihomogeneous_examples() {
    let s = JonqElement::sigma_ab(&[Cyclo::int(0)], &[Cyclo::int(1)]).unwrap();
    let amb = cremona_core::cremaps::Ambient::p1xp1();
    let want = ProjMap::parse(&amb, "(x1 : x2)(y2(x1 - x2) : y1 x1)").unwrap();
    assert_eq!(to_bihomogeneous(&s).unwrap(), want);
    assert!(to_bihomogeneous(&JonqElement::identity())
        .unwrap()
        .is_identity());
}

#[test]
fn class_group_orders() {
    assert_eq!(
        square_class_group(&x(), &poly(&[1, 1])).unwrap().absolute,
        4
    );
    let g = RatFunc::int(-1);
    let o = square_class_group(&g, &RatFunc::zero()).unwrap();
    // over Q the class of −1 survives
    assert_eq!(
        o,
        ClassGroupOrder {
            absolute: 1,
            effective: Some(2)
        }
    );
    // 25 and −25 + 9 = (4i)² are both squares in Q(i)
    let h = RatFunc::constant(&Cyclo::zeta(4) * &Cyclo::int(3));
    let o = square_class_group(&RatFunc::int(-25), &h).unwrap();
    assert_eq!(
        o,
        ClassGroupOrder {
            absolute: 1,
            effective: Some(1)
        }
    );
    // −g and g − h² share the radical x
    let o = square_class_group(&x(), &RatFunc::zero()).unwrap();
    assert_eq!(o.absolute, 2);
    assert_eq!(o.effective, Some(4));
}

#[test]
fn parses_elements() {
    let e = parse_element("0, x^4 - 1, 1, 0").unwrap();
    assert_eq!(e, JonqElement::sigma(&poly(&[-1, 0, 0, 0, 1])).unwrap());
    let e = parse_element("0, (x - 1)/(x), 1, 0; 1, 0, 0, 1").unwrap();
    assert_eq!(
        e,
        JonqElement::sigma_ab(&[Cyclo::int(0)], &[Cyclo::int(1)]).unwrap()
    );
    let e = parse_element("x + 1, x^4 - 1, 1, x + 1; zeta(4), 0, 0, 1").unwrap();
    assert_eq!(order_j(&e, 50), Order::OverCap);
    assert!(parse_element("0, 0, 0, 0").is_err());
    assert!(parse_element("1, 2, 3").is_err());
    assert!(parse_element("1, 0, 0, 1; x, 0, 0, 1").is_err());
}

fn small_poly() -> impl Strategy<Value = RatFunc> {
    prop::collection::vec(-3i64..=3, 1..=3).prop_map(|c| poly(&c))
}

fn fibre_element() -> impl Strategy<Value = JonqElement> {
    [small_poly(), small_poly(), small_poly(), small_poly()]
        .prop_filter_map("singular", |a| JonqElement::fibre(a).ok())
}

fn element() -> impl Strategy<Value = JonqElement> {
    let beta = prop_oneof![
        Just([1, 0, 0, 1]),
        Just([-1, 0, 0, 1]),
        Just([1, 1, 0, 1]),
        Just([0, 1, 1, 0]),
        Just([2, 0, 0, 1]),
    ];
    (
        [small_poly(), small_poly(), small_poly(), small_poly()],
        beta,
    )
        .prop_filter_map("singular", |(a, b)| {
            JonqElement::new(a, b.map(Cyclo::int)).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn group_laws(a in element(), b in element(), c in element()) {
        prop_assert_eq!(compose_j(&compose_j(&a, &b), &c), compose_j(&a, &compose_j(&b, &c)));
        prop_assert_eq!(compose_j(&a, &JonqElement::identity()), a.clone());
        prop_assert!(compose_j(&a, &a.inverse()).is_identity());
        prop_assert!(compose_j(&a.inverse(), &a).is_identity());
    }

    #[test]
    fn det_class_conjugation_invariant(g in small_poly(), c in fibre_element()) {
        prop_assume!(!g.is_zero());
        let s = JonqElement::sigma(&g).unwrap();
        let conj = compose_j(&compose_j(&c, &s), &c.inverse());
        let a = det_class(&s).unwrap();
        let b = det_class(&conj).unwrap();
        prop_assert_eq!(&a.radical, &b.radical);
        prop_assert_eq!(a.same_class(&b), Some(true));
        prop_assert_eq!(is_twisting(&conj).unwrap(), is_twisting(&s).unwrap());
    }

    #[test]
    fn bihomogeneous_is_homomorphism(a in element(), b in element()) {
        let lhs = to_bihomogeneous(&compose_j(&a, &b)).unwrap();
        let rhs = compose(&to_bihomogeneous(&a).unwrap(), &to_bihomogeneous(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bihomogeneous_is_injective(a in element(), b in element()) {
        let same = to_bihomogeneous(&a).unwrap() == to_bihomogeneous(&b).unwrap();
        prop_assert_eq!(same, a == b);
    }

    #[test]
    fn genus_matches_twisted_fibres(g in small_poly(), h in small_poly()) {
        let f = &g * &h;
        prop_assume!(!f.is_zero());
        let s = JonqElement::sigma(&f).unwrap();
        if let Ok(r) = ramification_data(&s) {
            prop_assert_eq!(r.two_k % 2, 0);
            prop_assert_eq!(r.genus + 1, r.two_k / 2);
            prop_assert_eq!(r.two_k >= 4, r.genus >= 1);
        } else {
            prop_assert!(!is_twisting(&s).unwrap().absolute);
        }
    }

    // Squares of fibrewise elements are never twisting involutions: search
    // over A with (tr A)² = 2 det A, the condition for A² to be an involution.
    #[test]
    fn no_twisting_square_roots(a in small_poly(), d in small_poly(), b in small_poly()) {
        prop_assume!(!b.is_zero());
        let c = -&(&(&a * &a) + &(&d * &d)).div(&b.scale(&Cyclo::int(2))).unwrap();
        let Ok(r) = JonqElement::fibre([a, b, c, d]) else { return Ok(()) };
        let r2 = compose_j(&r, &r);
        prop_assume!(is_involution(&r2));
        prop_assert!(!is_twisting(&r2).unwrap().absolute);
    }
}
