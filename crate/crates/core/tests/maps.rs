use cremona_core::cremaps::corpus::{invariant_factors, parse_corpus, verify_row};
use cremona_core::cremaps::special::{
    cs24_generators, dp4_cubics, dp4_roster, kappa, quadratic_involution, quadric_residual,
    verify_dp4_embedding, verify_kappa,
};
use cremona_core::cremaps::{
    commute, compose, order, parse_tuple, power, pull_back_factor, semi_invariance,
    span_invariance, Ambient, Hypersurface, ProjMap, ProjPoint, DEGREE_CAP, ORDER_CAP,
};
use cremona_core::exactmath::Cyclo;
use cremona_core::Order;
use proptest::prelude::*;

fn p2(s: &str) -> ProjMap {
    ProjMap::parse(&Ambient::p2(), s).unwrap()
}

fn ord(f: &ProjMap) -> Order {
    order(f, ORDER_CAP, DEGREE_CAP)
}

#[test]
fn cs24_identities() {
    let (g1, g2) = cs24_generators();
    let minus_x = p2("(-x : y : z)");
    assert_eq!(compose(&g1, &g1).unwrap(), minus_x);
    assert_eq!(compose(&g2, &g2).unwrap(), minus_x);
    assert_eq!(ord(&g1), Order::Finite(4));
    assert_eq!(ord(&g2), Order::Finite(4));
    assert!(commute(&g1, &g2).unwrap());
    assert_eq!(
        compose(&g1, &g2).unwrap(),
        p2("(x(y + z) : z(y - z) : -y(y - z))")
    );
}

#[test]
fn cs24_printed_variant_is_degenerate() {
    // (yz : xy : -yz) reduces to the rank 2 linear map (z : x : -z).
    let f = p2("(yz : xy : -yz)");
    assert_eq!(f, p2("(z : x : -z)"));
    assert_eq!(ord(&f), Order::OverCap);
}

#[test]
fn order_nine_cubic() {
    let a = Ambient::p3();
    let f = ProjMap::parse(&a, "(zeta(9) w : x : zeta(3) y : zeta(3)^2 z)").unwrap();
    assert_eq!(ord(&f), Order::Finite(9));
    let s = Hypersurface::new(&a, a.parse("w^3 + x z^2 + x^2 y + y^2 z").unwrap()).unwrap();
    let raw: Vec<_> = parse_tuple("(zeta(9) w : x : zeta(3) y : zeta(3)^2 z)")
        .unwrap()
        .iter()
        .map(|e| a.parse(e).unwrap())
        .collect();
    assert_eq!(pull_back_factor(&s.f, &raw), Some(Cyclo::zeta(3)));
    // The canonical representative differs by a scalar, which rescales λ by its cube.
    let lam = semi_invariance(&s, &f).unwrap().unwrap();
    assert_eq!(lam.pow(3).unwrap(), Cyclo::one());
}

#[test]
fn quadratic_involution_with_coefficients() {
    let q = quadratic_involution(&Cyclo::int(1), &Cyclo::int(2), &Cyclo::int(3)).unwrap();
    assert_eq!(ord(&q), Order::Finite(2));
    let q = quadratic_involution(&Cyclo::one(), &Cyclo::one(), &Cyclo::one()).unwrap();
    assert_eq!(q, p2("(yz : xz : xy)"));
}

#[test]
fn dp4_embedding() {
    let r = verify_dp4_embedding();
    assert!(r.pass, "{:?}", r.residuals);
    // F5 vanishes at (1:0:0) for every a, b, c.
    let f5 = &dp4_cubics()[4];
    let at = [1, 0, 0, 2, 5, 7].map(Cyclo::int);
    assert!(f5.eval(&at).is_zero());
}

#[test]
fn dp4_second_quadric_sign_is_forced() {
    let other = ["0", "c", "-b", "c - b", "-bc(c - b)"];
    assert!(!quadric_residual(&other, &dp4_cubics()).is_zero());
    let first_alt = ["c", "0", "-a", "-(a - c)", "-ac(a - c)"];
    let res = quadric_residual(&first_alt, &dp4_cubics());
    assert!(!res.is_zero(), "{}", res.fmt_with(&dp4_roster()));
}

#[test]
fn kappa_examples() {
    let one = Cyclo::one();
    let k = kappa(&one, &one).unwrap();
    assert!(compose(&k, &k).unwrap().is_identity());
    let k = kappa(&one, &Cyclo::int(-1)).unwrap();
    let expect = ProjMap::parse(&Ambient::p2xp2(), "(x : -y : -z)(u : -v : -w)").unwrap();
    assert_eq!(compose(&k, &k).unwrap(), expect);
    let r = verify_kappa(&Cyclo::zeta(3), &Cyclo::int(2)).unwrap();
    assert!(r.preserves_surface && r.square_matches);
}

const ROWS: &str = "\
2.G44 | P | 2,1,1,1 | F = w^2 - x^4 - y^4 - z^4 | gen = (-w : x : y : z) ; (w : x : y : zeta(4) z) ; (w : x : zeta(4) y : z) | expect order=2,4,4 structure=2,4,4
4.42 | P4 | - | F = 3x1^2 - x3^2 - 2x4^2 + 6x5^2, 3x2^2 - 2x3^2 - x4^2 + 6x5^2 | gen = (-x2 : x1 : x4 : x3 : -x5) ; (x1 : x2 : x3 : x4 : -x5) | expect order=4,2 structure=2,4
1.B | P | 3,1,1,2 | F = w^2 - z^3 - (x^4 + y^4) z - x^6 - 2x y^5 - y^6 | gen = (-w : x : y : z) | expect order=2 structure=2
";

#[test]
fn corpus_examples() {
    let rows = parse_corpus(ROWS).unwrap();
    let reps: Vec<_> = rows.iter().map(verify_row).collect();
    for r in &reps {
        assert!(r.pass, "{r:?}");
    }
    assert_eq!(reps[0].group_order, Some(32));
    assert_eq!(reps[0].structure, Some(vec![2, 4, 4]));
    assert_eq!(reps[1].group_order, Some(8));
}

#[test]
fn corpus_detects_bad_rows() {
    // Quartic with x^3 y is not preserved by y -> -y.
    let bad = "x | P | 2,1,1,1 | F = w^2 - x^3 y - y^4 - z^4 - x y(x y + 2z^2) | gen = (-w : x : y : z) ; (w : x : -y : zeta(4) z) | expect order=2,4 structure=2,4\n";
    let r = verify_row(&parse_corpus(bad).unwrap()[0]);
    assert!(!r.pass);
    assert_eq!(r.failures().next().unwrap().check, "invariance");
    // Wrong expected structure.
    let bad = "z | P2 | - | F = - | gen = (x : zeta(3) y : zeta(3)^2 z) ; (y : z : x) | expect order=3,3 structure=9\n";
    let r = verify_row(&parse_corpus(bad).unwrap()[0]);
    assert!(r.failures().any(|c| c.check == "structure"));
}

#[test]
fn dp4_cycle_variant() {
    let eqs = "(1 + zeta(4)) x1^2 - x3^2 - zeta(4) x4^2 + zeta(4)(1 + zeta(4)) x5^2, (1 + zeta(4)) x2^2 - zeta(4) x3^2 - x4^2 + zeta(4)(1 + zeta(4)) x5^2";
    let a = Ambient::p4();
    let eqs: Vec<_> = eqs.split(',').map(|e| a.parse(e.trim()).unwrap()).collect();
    // Both forms of the 4-cycle preserve the surface; only the first has order 8.
    for (g, n) in [
        ("(x4 : x3 : -x1 : x2 : zeta(4) x5)", 8),
        ("(-x4 : -x3 : x1 : x2 : zeta(4) x5)", 4),
    ] {
        let f = ProjMap::parse(&a, g).unwrap();
        assert!(span_invariance(&eqs, &f), "{g}");
        assert_eq!(ord(&f), Order::Finite(n), "{g}");
    }
}

#[test]
fn invariant_factor_counts() {
    // Z/2 × Z/4 × Z/4
    let mut orders = Vec::new();
    for a in 0..2u64 {
        for b in 0..4u64 {
            for c in 0..4u64 {
                let o = |k: u64, n: u64| n / num_gcd(k, n);
                orders.push(lcm(lcm(o(a, 2), o(b, 4)), o(c, 4)));
            }
        }
    }
    assert_eq!(invariant_factors(&orders), Some(vec![2, 4, 4]));
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / num_gcd(a, b) * b
}

fn root(n: u32, k: i64) -> Cyclo {
    Cyclo::zeta_pow(n, k)
}

fn small_map() -> impl Strategy<Value = ProjMap> {
    (0usize..6, prop::collection::vec(0i64..6, 3)).prop_map(|(perm, exps)| {
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let names = ["x", "y", "z"];
        let p = perms[perm];
        let comps: Vec<String> = (0..3)
            .map(|i| format!("zeta(6)^{} {}", exps[i], names[p[i]]))
            .collect();
        p2(&format!("({})", comps.join(" : ")))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_is_idempotent(f in small_map(), c in 1i64..7) {
        let scaled: Vec<_> = f.components().iter().map(|p| p.scale(&Cyclo::int(c))).collect();
        let g = ProjMap::new(f.ambient(), scaled).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(ProjMap::new(f.ambient(), g.components().to_vec()).unwrap(), g);
    }

    #[test]
    fn compose_is_associative(f in small_map(), g in small_map(), h in small_map()) {
        let a = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let b = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn order_of_powers(f in small_map(), k in 1u64..8) {
        if let Order::Finite(n) = ord(&f) {
            let fk = power(&f, k).unwrap();
            prop_assert_eq!(ord(&fk), Order::Finite(n / num_gcd(n, k)));
        }
    }

    #[test]
    fn weighted_equality_is_an_equivalence(
        coords in prop::collection::vec(-3i64..4, 4),
        k1 in 0i64..12, k2 in 0i64..12,
    ) {
        let a = Ambient::weighted(&[3, 1, 1, 2]).unwrap();
        prop_assume!(coords.iter().any(|&c| c != 0));
        let p = ProjPoint::from_ints(&a, &coords).unwrap();
        let q = p.rescale(&root(12, k1));
        let r = q.rescale(&(&root(12, k2) * &Cyclo::int(2)));
        prop_assert!(p.equivalent(&p));
        prop_assert!(p.equivalent(&q) && q.equivalent(&p));
        prop_assert!(q.equivalent(&r) && p.equivalent(&r));
    }
}
