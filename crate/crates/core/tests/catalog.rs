use ringlab::verify::{
    claims, parse_predicate, run_claim, run_claims, search_counterexamples, Catalog, SearchConfig, Verdict,
};
use ringlab::Budgets;

#[test]
fn builtin_round_trips_through_a_directory() {
    let budgets = Budgets::default();
    let cat = Catalog::builtin(&budgets).unwrap();
    let dir = tempfile::tempdir().unwrap();
    cat.save(dir.path()).unwrap();
    let back = Catalog::load(dir.path(), &budgets).unwrap();
    assert_eq!(cat.rings.len(), back.rings.len());
    for (a, b) in cat.rings.iter().zip(&back.rings) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.fingerprint, b.fingerprint, "{}", a.name);
        assert_eq!(a.ring.tables(), b.ring.tables(), "{}", a.name);
    }
    let names = |c: &Catalog| c.modules.iter().map(|m| (m.name.clone(), m.module.order())).collect::<Vec<_>>();
    assert_eq!(names(&cat), names(&back));
    assert_eq!(cat.pairs, back.pairs);
    assert_eq!(cat.duplicates, back.duplicates);
}

#[test]
fn reports_are_deterministic() {
    let budgets = Budgets::default();
    let cat = Catalog::builtin(&budgets).unwrap();
    let all: Vec<_> = claims().iter().collect();
    let a = serde_json::to_string(&run_claims(&cat, &all, &budgets).without_timing()).unwrap();
    let b = serde_json::to_string(&run_claims(&cat, &all, &budgets).without_timing()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn documented_verdicts() {
    let budgets = Budgets::default();
    let cat = Catalog::builtin(&budgets).unwrap();
    let ck = run_claim("T-CK", &cat, &budgets).unwrap();
    assert!(ck.results.iter().all(|r| r.verdict == Verdict::Holds));
    let fwd = run_claim("T-3.1-fwd", &cat, &budgets).unwrap();
    assert_eq!(fwd.verdict("T-3.1-fwd", "Z4"), Some(Verdict::HypothesisNotMet));
    assert_eq!(fwd.verdict("T-3.1-fwd", "Z6"), Some(Verdict::Holds));
    let reg = run_claim("INV-FIN-REG", &cat, &budgets).unwrap();
    assert!(reg.results.iter().all(|r| r.verdict == Verdict::Holds));
    assert_eq!(reg.exit_code(), 0);
}

#[test]
fn seeded_search_is_reproducible() {
    let pred = parse_predicate("abelian & !rickart").unwrap();
    let cfg = SearchConfig { sample: Some(10), seed: 7, ..Default::default() };
    let a = search_counterexamples(&pred, &cfg, &Budgets::default());
    let b = search_counterexamples(&pred, &cfg, &Budgets::default());
    assert_eq!(a.examined, 10);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.findings.iter().all(|f| f.reverified));
}
