use proptest::prelude::*;

use ringlab::analysis::RingReport;
use ringlab::decomp::{decompositions, BaseKind, DecompKind};
use ringlab::dsl::{parse_expr, InvolutionKind};
use ringlab::elements::RingFacts;
use ringlab::verify::{parse_predicate, Predicate};
use ringlab::{construct, fingerprint, parse_spec, Budgets, Environment, FinRing, RingExpr, RingSpec};

const CAP: usize = 64;

fn leaf() -> impl Strategy<Value = RingExpr> {
    prop_oneof![
        (1usize..=8).prop_map(RingExpr::Zmod),
        (2usize..=3, 1usize..=2).prop_map(|(p, k)| RingExpr::Gf { p, k }),
    ]
}

fn order_of(e: &RingExpr) -> usize {
    let pow = |b: usize, k: usize| b.checked_pow(k as u32).unwrap_or(usize::MAX);
    match e {
        RingExpr::Zmod(n) => *n,
        RingExpr::Gf { p, k } => pow(*p, *k),
        RingExpr::Matrix(b, k) => pow(order_of(b), k * k),
        RingExpr::UpperTri(b, k) => pow(order_of(b), k * (k + 1) / 2),
        RingExpr::Product(a, b) => order_of(a).saturating_mul(order_of(b)),
        RingExpr::Opposite(a) => order_of(a),
        _ => unreachable!(),
    }
}

/// Ring expressions of order at most [`CAP`].
fn expr() -> impl Strategy<Value = RingExpr> {
    leaf()
        .prop_recursive(3, 8, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|b| RingExpr::Matrix(Box::new(b), 2)),
                inner.clone().prop_map(|b| RingExpr::UpperTri(Box::new(b), 2)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| RingExpr::Product(Box::new(a), Box::new(b))),
                inner.prop_map(|a| RingExpr::Opposite(Box::new(a))),
            ]
        })
        .prop_filter("order within cap", |e| order_of(e) <= CAP)
}

fn build(spec: &RingSpec) -> FinRing {
    construct(spec, &Environment::default(), CAP).expect("generated spec constructs")
}

fn flag_names() -> Vec<&'static str> {
    vec!["abelian", "CS", "C2", "C3", "rickart", "clean", "almost_clean", "vn_regular", "right_nonsingular"]
}

fn predicate() -> impl Strategy<Value = Predicate> {
    let leaf = prop::sample::select(flag_names()).prop_map(|s| Predicate::Flag(s.to_string()));
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|p| Predicate::Not(Box::new(p))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::Implies(Box::new(a), Box::new(b))),
            prop::collection::vec(inner, 2..4).prop_map(Predicate::Iff),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(e in expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_expr(&text).unwrap(), e.clone());
        let spec = RingSpec::plain(e);
        prop_assert_eq!(parse_spec(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn construction_is_deterministic_and_valid(e in expr()) {
        let spec = RingSpec::plain(e);
        let a = build(&spec);
        let b = build(&spec);
        prop_assert_eq!(a.tables(), b.tables());
        prop_assert_eq!(a.order(), order_of(&spec.expr));
        prop_assert!(ringlab::validate_ring(a.tables()).is_ok());
        prop_assert_eq!(fingerprint(&RingFacts::new(a)), fingerprint(&RingFacts::new(b)));
    }

    #[test]
    fn double_opposite_is_the_ring(e in expr()) {
        let r = build(&RingSpec::plain(e));
        prop_assert_eq!(r.opposite().opposite().tables(), r.tables());
    }

    #[test]
    fn predicates_round_trip(p in predicate()) {
        let text = p.to_string();
        let back = parse_predicate(&text).unwrap();
        let names = flag_names();
        for mask in 0u32..(1 << names.len()) {
            let lookup = |n: &str| names.iter().position(|m| *m == n).map(|i| mask & (1 << i) != 0);
            prop_assert_eq!(p.eval(&lookup), back.eval(&lookup), "{}", text);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Implications between flags that hold in every ring.
    #[test]
    fn flag_implications(e in expr().prop_filter("small", |e| order_of(e) <= 32)) {
        let r = build(&RingSpec::plain(e));
        let rep = RingReport::new(r, &Budgets::default()).unwrap();
        let f = |n: &str| rep.flag(n).unwrap().holds;
        for (a, b) in [
            ("special_clean", "clean"),
            ("special_almost_clean", "almost_clean"),
            ("clean", "almost_clean"),
            ("special_clean", "special_almost_clean"),
            ("uniquely_special_clean", "special_clean"),
            ("uniquely_special_almost_clean", "special_almost_clean"),
            ("unit_regular", "vn_regular"),
            ("vn_regular", "rickart"),
            ("vn_regular", "right_nonsingular"),
            ("C2", "C3"),
            ("continuous", "quasi_continuous"),
            ("quasi_continuous", "CS"),
            ("reduced", "abelian"),
            ("commutative", "abelian"),
        ] {
            prop_assert!(!f(a) || f(b), "{} without {} on {}", a, b, rep.label);
        }
        prop_assert_eq!(f("unit_regular"), f("special_clean"));
    }

    /// Listed decompositions are exactly the idempotents passing a direct check.
    #[test]
    fn decompositions_match_direct_filter(e in expr().prop_filter("small", |e| order_of(e) <= 32), pick in any::<prop::sample::Index>()) {
        let r = build(&RingSpec::plain(e));
        let facts = RingFacts::new(r);
        let r = &facts.ring;
        let a = pick.index(r.order());
        let zero = r.zero();
        let right_set = |x: usize| -> Vec<usize> {
            let mut v: Vec<usize> = r.elements().map(|y| r.mul(x, y)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        for base in BaseKind::ALL {
            let got: Vec<usize> = decompositions(&facts, a, DecompKind::plain(base)).iter().map(|d| d.idempotent).collect();
            let want: Vec<usize> = r
                .elements()
                .filter(|&e| r.mul(e, e) == e)
                .filter(|&e| {
                    let u = r.sub(a, e);
                    let unit = r.elements().any(|y| r.mul(u, y) == r.one() && r.mul(y, u) == r.one());
                    let regular = r.elements().all(|y| y == zero || (r.mul(u, y) != zero && r.mul(y, u) != zero));
                    let ok = if base.needs_unit() { unit } else { regular };
                    let special = {
                        let (ar, er) = (right_set(a), right_set(e));
                        ar.iter().all(|x| *x == zero || !er.contains(x))
                    };
                    ok && (!base.is_special() || special)
                })
                .collect();
            prop_assert_eq!(got, want, "{:?} at {}", base, a);
        }
    }

    /// A failing clean flag names an element with no clean decomposition.
    #[test]
    fn witnesses_are_counterexamples(e in expr().prop_filter("small", |e| order_of(e) <= 32)) {
        let r = build(&RingSpec::plain(e));
        let rep = RingReport::new(r, &Budgets::default()).unwrap();
        for (name, base) in [("clean", BaseKind::Clean), ("special_clean", BaseKind::SpecialClean), ("special_almost_clean", BaseKind::SpecialAlmostClean)] {
            let flag = rep.flag(name).unwrap();
            if let Some(ringlab::report::Witness::Element(a)) = flag.witness.filter(|_| !flag.holds) {
                prop_assert!(decompositions(&rep.facts, a, DecompKind::plain(base)).is_empty());
                for b in 0..a {
                    prop_assert!(!decompositions(&rep.facts, b, DecompKind::plain(base)).is_empty(), "witness {} is not least", a);
                }
            }
        }
    }
}

#[test]
fn star_flags_only_with_involution() {
    let plain = build(&parse_spec("product(gf(2), gf(2))").unwrap());
    let rep = RingReport::new(plain, &Budgets::default()).unwrap();
    assert!(rep.flag("rickart_star").is_none());
    let mut spec = parse_spec("product(gf(2), gf(2))").unwrap();
    spec.involution = Some(InvolutionKind::Swap);
    let rep = RingReport::new(build(&spec), &Budgets::default()).unwrap();
    assert!(!rep.flag("rickart_star").unwrap().holds);
    assert!(rep.flag("rickart").unwrap().holds);
}
