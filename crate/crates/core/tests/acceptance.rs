//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Library results are compared against brute-force
//! oracles written directly over the operation tables.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ringlab::analysis::RingReport;
use ringlab::decomp::{decompositions, rickart_witness, BaseKind, DecompKind};
use ringlab::lattice::unit_regular_characterizations;
use ringlab::modlab::{endomorphism_ring, regular_endomorphism_iso, FinModule, ModuleFacts, MonoKind};
use ringlab::report::Witness;
use ringlab::verify::{claim, run_claims_on, select_claims, Catalog, Claim, SuiteReport, Verdict, Workbench};
use ringlab::{construct, parse_spec, Budgets, Elem, Environment, FinRing};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

// ---------------------------------------------------------------- oracles

struct Oracle<'a> {
    r: &'a FinRing,
    idempotents: Vec<Elem>,
    units: Vec<Elem>,
    regular: Vec<bool>,
}

impl<'a> Oracle<'a> {
    fn new(r: &'a FinRing) -> Self {
        let n = r.order();
        let one = r.one();
        let idempotents = (0..n).filter(|&e| r.mul(e, e) == e).collect();
        let units = (0..n).filter(|&x| (0..n).any(|y| r.mul(x, y) == one && r.mul(y, x) == one)).collect();
        let zero = r.zero();
        let regular = (0..n)
            .map(|a| (0..n).filter(|&x| x != zero).all(|x| r.mul(a, x) != zero && r.mul(x, a) != zero))
            .collect();
        Oracle { r, idempotents, units, regular }
    }

    fn is_unit(&self, x: Elem) -> bool {
        self.units.contains(&x)
    }

    fn right_principal(&self, a: Elem) -> Vec<bool> {
        let mut s = vec![false; self.r.order()];
        for x in self.r.elements() {
            s[self.r.mul(a, x)] = true;
        }
        s
    }

    fn right_ann(&self, a: Elem) -> Vec<bool> {
        self.r.elements().map(|x| self.r.mul(a, x) == self.r.zero()).collect()
    }

    fn left_principal(&self, a: Elem) -> Vec<bool> {
        let mut s = vec![false; self.r.order()];
        for x in self.r.elements() {
            s[self.r.mul(x, a)] = true;
        }
        s
    }

    fn left_ann(&self, a: Elem) -> Vec<bool> {
        self.r.elements().map(|x| self.r.mul(x, a) == self.r.zero()).collect()
    }

    /// `aR ∩ bR = 0`.
    fn meet_zero(&self, a: Elem, b: Elem) -> bool {
        let (pa, pb) = (self.right_principal(a), self.right_principal(b));
        self.r.elements().all(|x| x == self.r.zero() || !(pa[x] && pb[x]))
    }

    fn right_rickart(&self) -> bool {
        self.r.elements().all(|a| {
            let ann = self.right_ann(a);
            self.idempotents.iter().any(|&e| self.right_principal(e) == ann)
        })
    }

    fn left_rickart(&self) -> bool {
        self.r.elements().all(|a| {
            let ann = self.left_ann(a);
            self.idempotents.iter().any(|&e| self.left_principal(e) == ann)
        })
    }

    /// Idempotents `e` with `a - e` a unit (or regular) and, if `special`, `aR ∩ eR = 0`.
    fn decompositions(&self, a: Elem, unit: bool, special: bool, among: &[Elem]) -> Vec<Elem> {
        among
            .iter()
            .copied()
            .filter(|&e| {
                let u = self.r.sub(a, e);
                (if unit { self.is_unit(u) } else { self.regular[u] }) && (!special || self.meet_zero(a, e))
            })
            .collect()
    }

    /// `a = aua`, `a = eu`, `a = u'e'`.
    fn unit_regular_tests(&self, a: Elem) -> [bool; 3] {
        let r = self.r;
        let t1 = self.units.iter().any(|&u| r.mul(r.mul(a, u), a) == a);
        let t2 = self.idempotents.iter().any(|&e| self.units.iter().any(|&u| r.mul(e, u) == a));
        let t3 = self.idempotents.iter().any(|&e| self.units.iter().any(|&u| r.mul(u, e) == a));
        [t1, t2, t3]
    }
}

// ---------------------------------------------------------------- helpers

fn build(text: &str) -> Arc<FinRing> {
    let spec = parse_spec(text).expect("spec parses");
    Arc::new(construct(&spec, &Environment::default(), Budgets::default().max_order).expect("spec constructs"))
}

fn flag(rep: &RingReport, name: &str) -> bool {
    rep.flag(name).unwrap_or_else(|| panic!("flag {name}")).holds
}

fn claims_of(ids: &[&str]) -> Vec<&'static Claim> {
    ids.iter().flat_map(|id| select_claims(id)).collect()
}

/// No violations, no skips, and every claim had at least one instance.
fn clean_run(report: &SuiteReport, ids: &[&Claim]) -> Result<(), String> {
    if let Some(v) = report.violations().next() {
        return Err(format!("{} VIOLATED on {}: {}", v.claim, v.instance, v.witness.clone().unwrap_or_default()));
    }
    if let Some(s) = report.results.iter().find(|r| r.verdict == Verdict::Skipped) {
        return Err(format!("{} skipped on {}: {}", s.claim, s.instance, s.witness.clone().unwrap_or_default()));
    }
    for c in ids {
        ensure!(report.for_claim(c.id).count() > 0, "{} has no instances", c.id);
    }
    Ok(())
}

fn tally(report: &SuiteReport) -> String {
    format!(
        "{} instances, {} holds, {} hypothesis-not-met",
        report.results.len(),
        report.count(Verdict::Holds),
        report.count(Verdict::HypothesisNotMet)
    )
}

fn star_rings(cat: &Catalog) -> Vec<usize> {
    (0..cat.rings.len()).filter(|&i| cat.rings[i].spec.involution.is_some()).collect()
}

// ---------------------------------------------------------------- criteria

fn integers_mod_four() -> Outcome {
    let ring = build("ring A = zmod(4)");
    let rep = RingReport::new(ring.clone(), &Budgets::default()).map_err(|e| e.to_string())?;
    for (name, want) in [
        ("clean", true),
        ("almost_clean", true),
        ("special_almost_clean", false),
        ("quasi_continuous", true),
        ("right_nonsingular", false),
        ("rickart", false),
        ("vn_regular", false),
    ] {
        ensure!(flag(&rep, name) == want, "{name} should be {want}");
    }
    let w = rep.flag("special_almost_clean").unwrap().witness;
    ensure!(w == Some(Witness::Element(2)), "special almost clean witness {w:?}, expected element 2");

    let clean2: Vec<_> = decompositions(&rep.facts, 2, DecompKind::plain(BaseKind::Clean))
        .iter()
        .map(|d| (d.idempotent, d.complement))
        .collect();
    ensure!(clean2 == vec![(1, 1)], "clean decompositions of 2: {clean2:?}");
    let o = Oracle::new(&ring);
    ensure!(o.decompositions(2, true, false, &o.idempotents) == vec![1], "oracle: 2 = 1 + 1 is not the only clean decomposition");
    ensure!(!o.meet_zero(2, 1), "oracle: 2R ∩ 1R should be nonzero");
    ensure!(o.decompositions(2, false, true, &o.idempotents).is_empty(), "oracle: 2 has a special almost clean decomposition");
    ensure!(o.r.elements().all(|a| !o.decompositions(a, true, false, &o.idempotents).is_empty()), "oracle: not clean");
    Ok("flags match; sole clean decomposition of 2 is e=1 u=1, not special".into())
}

fn upper_triangular_gf2() -> Outcome {
    let ring = build("ring S = uppertri(gf(2),2)");
    let rep = RingReport::new(ring.clone(), &Budgets::default()).map_err(|e| e.to_string())?;
    for (name, want) in [("CS", true), ("right_nonsingular", true), ("quasi_continuous", false), ("clean", true)] {
        ensure!(flag(&rep, name) == want, "{name} should be {want}");
    }
    let o = Oracle::new(&ring);
    ensure!(o.r.elements().all(|a| !o.decompositions(a, true, false, &o.idempotents).is_empty()), "oracle: not clean");
    Ok(format!("order {}: CS, nonsingular, clean, not quasi-continuous", ring.order()))
}

fn upper_triangular_over_s() -> Outcome {
    let ring = build("ring R = uppertri(uppertri(gf(2),2),2)");
    ensure!(ring.order() == 512, "order {}", ring.order());
    let rep = RingReport::new(ring.clone(), &Budgets::default()).map_err(|e| e.to_string())?;
    ensure!(!flag(&rep, "CS"), "R should not be CS");
    ensure!(flag(&rep, "clean"), "R should be clean");
    let o = Oracle::new(&ring);
    ensure!(o.r.elements().all(|a| !o.decompositions(a, true, false, &o.idempotents).is_empty()), "oracle: not clean");
    let w = rep.flag("CS").unwrap().witness.map(|w| w.to_string()).unwrap_or_default();
    Ok(format!("order 512 with {} right ideals: not CS (at {w}), clean", rep.class.ideals))
}

fn unit_regular_iff_special_clean(cat: &Catalog) -> Outcome {
    let wb = Workbench::new(cat, &Budgets::default());
    let ids = claims_of(&["T-CK"]);
    let report = run_claims_on(&wb, &ids);
    clean_run(&report, &ids)?;
    ensure!(report.for_claim("T-CK").count() == cat.rings.len(), "T-CK did not cover every ring");
    for (i, e) in cat.rings.iter().enumerate() {
        let rep = wb.ring(i)?;
        ensure!(flag(&rep, "unit_regular") == flag(&rep, "special_clean"), "{}: unit_regular != special_clean", e.name);
        let o = Oracle::new(&e.ring);
        let ur = o.r.elements().all(|a| o.unit_regular_tests(a)[0]);
        let sc = o.r.elements().all(|a| !o.decompositions(a, true, true, &o.idempotents).is_empty());
        ensure!(ur == sc, "oracle on {}: unit regular {ur}, special clean {sc}", e.name);
        ensure!(ur == flag(&rep, "unit_regular"), "{}: library and oracle disagree on unit regularity", e.name);
    }
    Ok(format!("{} rings, zero violations", cat.rings.len()))
}

fn abelian_rickart(cat: &Catalog) -> Outcome {
    let wb = Workbench::new(cat, &Budgets::default());
    let ids = claims_of(&["T-3.1"]);
    ensure!(ids.len() == 2, "expected forward and backward claims");
    let report = run_claims_on(&wb, &ids);
    clean_run(&report, &ids)?;
    let mut rings = 0;
    let mut elements = 0;
    for (i, e) in cat.rings.iter().enumerate() {
        let rep = wb.ring(i)?;
        if !flag(&rep, "abelian") {
            continue;
        }
        let o = Oracle::new(&e.ring);
        let rickart = o.right_rickart();
        ensure!(rickart == flag(&rep, "rickart_right"), "{}: library and oracle disagree on Rickart", e.name);
        let sac = o.r.elements().all(|a| !o.decompositions(a, false, true, &o.idempotents).is_empty());
        ensure!(rickart == sac, "oracle on {}: Rickart {rickart}, special almost clean {sac}", e.name);
        if !rickart {
            continue;
        }
        rings += 1;
        for a in e.ring.elements() {
            let d = rickart_witness(&rep.facts, a).map_err(|err| format!("{} at {a}: {err}", e.name))?;
            let (x, u) = (d.idempotent, d.complement);
            ensure!(e.ring.mul(x, x) == x, "{} at {a}: witness {x} not idempotent", e.name);
            ensure!(e.ring.add(x, u) == a, "{} at {a}: witness does not sum to a", e.name);
            ensure!(o.regular[u], "{} at {a}: complement {u} not regular", e.name);
            ensure!(o.meet_zero(a, x), "{} at {a}: aR ∩ eR nonzero", e.name);
            elements += 1;
        }
    }
    ensure!(rings > 0, "no abelian Rickart rings in the catalog");
    Ok(format!("{}; witnesses re-verified on {elements} elements of {rings} rings", tally(&report)))
}

fn uniqueness(cat: &Catalog) -> Outcome {
    let wb = Workbench::new(cat, &Budgets::default());
    let ids = claims_of(&["P-4.1", "C-4.2", "C-4.3"]);
    let report = run_claims_on(&wb, &ids);
    clean_run(&report, &ids)?;
    let (mut sc_rings, mut qcns_rings) = (0, 0);
    for (i, e) in cat.rings.iter().enumerate() {
        let rep = wb.ring(i)?;
        if !flag(&rep, "abelian") {
            continue;
        }
        let o = Oracle::new(&e.ring);
        if flag(&rep, "special_clean") {
            sc_rings += 1;
            for a in e.ring.elements() {
                let n = o.decompositions(a, true, true, &o.idempotents).len();
                ensure!(n == 1, "{} at {a}: {n} special clean decompositions", e.name);
            }
        }
        if flag(&rep, "quasi_continuous") && flag(&rep, "right_nonsingular") {
            qcns_rings += 1;
            for a in e.ring.elements() {
                let n = o.decompositions(a, false, true, &o.idempotents).len();
                ensure!(n == 1, "{} at {a}: {n} special almost clean decompositions", e.name);
            }
            ensure!(flag(&rep, "uniquely_special_almost_clean"), "{}: flag disagrees with oracle", e.name);
        }
    }
    ensure!(sc_rings > 0 && qcns_rings > 0, "nothing to check");
    Ok(format!("{}; unique decompositions on {sc_rings} special clean and {qcns_rings} QC+NS rings", tally(&report)))
}

fn qc_nonsingular_rickart(cat: &Catalog) -> Outcome {
    let wb = Workbench::new(cat, &Budgets::default());
    let ids = claims_of(&["C-3.4"]);
    let report = run_claims_on(&wb, &ids);
    clean_run(&report, &ids)?;
    let mut n = 0;
    for (i, e) in cat.rings.iter().enumerate() {
        let rep = wb.ring(i)?;
        if flag(&rep, "quasi_continuous") && flag(&rep, "right_nonsingular") {
            let o = Oracle::new(&e.ring);
            ensure!(o.right_rickart() && o.left_rickart(), "oracle: {} is not left and right Rickart", e.name);
            n += 1;
        }
    }
    ensure!(report.count(Verdict::Holds) == n, "holds count {} != {n} QC+NS rings", report.count(Verdict::Holds));
    Ok(format!("{n} QC+NS rings, all left and right Rickart"))
}

fn star_rings_and_swap(cat: &Catalog) -> Outcome {
    let wb = Workbench::new(cat, &Budgets::default());
    let ids = claims_of(&["T-6.2", "T-6.3", "C-6.4"]);
    let report = run_claims_on(&wb, &ids);
    clean_run(&report, &ids)?;
    let stars = star_rings(cat);
    ensure!(report.results.len() == ids.len() * stars.len(), "star claims did not cover every star ring");

    let i = cat.ring_index("F2xF2_swap").ok_or("no swap ring in catalog")?;
    let rep = wb.ring(i)?;
    ensure!(flag(&rep, "rickart"), "swap ring should be Rickart");
    ensure!(!flag(&rep, "rickart_star"), "swap ring should not be a Rickart *-ring");
    ensure!(!flag(&rep, "special_almost_star_clean"), "swap ring should not be special almost *-clean");

    // (1,0) is index 2 under the a·|B| + b product layout.
    let r = &cat.rings[i].ring;
    let a = 2;
    ensure!(r.mul(a, a) == a && r.add(a, a) == r.zero() && r.star(a) == Some(1), "index 2 is not (1,0)");
    let o = Oracle::new(r);
    let projections: Vec<Elem> = o.idempotents.iter().copied().filter(|&p| r.star(p) == Some(p)).collect();
    ensure!(projections == vec![0, 3], "projections {projections:?}");
    let ann = o.right_ann(a);
    ensure!(!projections.iter().any(|&p| o.right_principal(p) == ann), "oracle: ann_r(1,0) is generated by a projection");
    ensure!(o.decompositions(a, false, true, &projections).is_empty(), "oracle: (1,0) is special almost *-clean");
    let lib = decompositions(&rep.facts, a, DecompKind::star(BaseKind::SpecialAlmostClean));
    ensure!(lib.is_empty(), "library decomposes (1,0): {lib:?}");
    Ok(format!("{} on {} star rings; swap ring fails at a=(1,0)", tally(&report), stars.len()))
}

fn module_suite(cat: &Catalog) -> Outcome {
    let budgets = Budgets::default();
    let wb = Workbench::new(cat, &budgets);
    let ids: Vec<&Claim> = ["INV-C2C3", "P-2.4", "T-2.5", "INV-END-REG"].iter().map(|id| claim(id).unwrap()).collect();
    let report = run_claims_on(&wb, &ids);
    clean_run(&report, &ids)?;
    ensure!(
        report.for_claim("INV-C2C3").count() == cat.rings.len() + cat.modules.len(),
        "C2 => C3 did not cover every ring and module"
    );
    let mut qc = 0;
    for (i, m) in cat.modules.iter().enumerate() {
        let ma = wb.module(i)?;
        let f = |name: &str| ma.report.flags().into_iter().find(|(n, _)| *n == name).unwrap().1.holds;
        ensure!(!f("C2") || f("C3"), "{}: C2 without C3", m.name);
        if f("quasi_continuous") {
            qc += 1;
            let end = &ma.report.end;
            for (g, d) in ma.decompositions.iter().enumerate() {
                let d = d.as_ref().map_err(|e| format!("{} endomorphism {g}: {e}", m.name))?;
                let (e, u) = (d.idempotent, d.complement);
                ensure!(end.ring.mul(e, e) == e, "{}: {e} not idempotent", m.name);
                ensure!(end.ring.add(e, u) == g, "{}: decomposition of {g} does not sum", m.name);
                let hu = end.hom(u);
                let mut image: Vec<Elem> = m.module.elements().map(|x| hu.apply(x)).collect();
                image.sort_unstable();
                image.dedup();
                ensure!(image.len() == m.module.order(), "{}: complement of {g} not injective", m.name);
                ensure!(d.kind != MonoKind::Mono, "{}: complement of {g} is not essential", m.name);
            }
            if f("nonsingular") {
                ensure!(f("almost_clean"), "{}: QC + nonsingular but End(M) not almost clean", m.name);
            }
        }
    }
    let mut iso = 0;
    for e in cat.rings.iter().filter(|e| e.ring.order() <= 16) {
        let map = regular_endomorphism_iso(&e.ring, budgets.max_assignments)
            .map_err(|err| err.to_string())?
            .ok_or_else(|| format!("{}: End(R_R) is not isomorphic to R via left multiplication", e.name))?;
        let end = endomorphism_ring(&ModuleFacts::new(FinModule::regular(&e.ring)), budgets.max_assignments)
            .map_err(|err| err.to_string())?;
        let r = &e.ring;
        let mut seen = vec![false; end.order()];
        for a in r.elements() {
            ensure!(!seen[map[a]], "{}: map not injective", e.name);
            seen[map[a]] = true;
            ensure!(r.elements().all(|x| end.hom(map[a]).apply(x) == r.mul(a, x)), "{}: map[{a}] is not L_a", e.name);
            for b in r.elements() {
                ensure!(map[r.add(a, b)] == end.ring.add(map[a], map[b]), "{}: not additive", e.name);
                ensure!(map[r.mul(a, b)] == end.ring.mul(map[a], map[b]), "{}: not multiplicative", e.name);
            }
        }
        ensure!(end.order() == r.order(), "{}: |End| != |R|", e.name);
        iso += 1;
    }
    Ok(format!("{} modules ({qc} quasi-continuous); End(R_R) = R on {iso} rings", cat.modules.len()))
}

fn unit_regular_oracles(cat: &Catalog) -> Outcome {
    let wb = Workbench::new(cat, &Budgets::default());
    let ids = claims_of(&["INV-UR3", "INV-FIN-REG"]);
    let report = run_claims_on(&wb, &ids);
    clean_run(&report, &ids)?;
    let mut checked = 0;
    for (i, e) in cat.rings.iter().enumerate() {
        let rep = wb.ring(i)?;
        let o = Oracle::new(&e.ring);
        for a in e.ring.elements() {
            let t = o.unit_regular_tests(a);
            ensure!(t[0] == t[1] && t[1] == t[2], "{} at {a}: characterizations disagree {t:?}", e.name);
            let lib = unit_regular_characterizations(&rep.facts, a);
            ensure!(lib == t, "{} at {a}: library {lib:?} vs oracle {t:?}", e.name);
            ensure!(o.regular[a] == o.is_unit(a), "{} at {a}: regular element is not a unit", e.name);
            ensure!(rep.facts.elements.regular[a] == o.regular[a], "{} at {a}: library regularity differs", e.name);
            checked += 1;
        }
    }
    Ok(format!("{checked} elements over {} rings agree", cat.rings.len()))
}

// ---------------------------------------------------------------- runner

fn main() -> ExitCode {
    let start = Instant::now();
    let catalog = Catalog::builtin(&Budgets::default());
    let build_time = start.elapsed();
    let catalog = match catalog {
        Ok(c) => c,
        Err(e) => {
            println!("acceptance: FAIL building catalog: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!(
        "acceptance: catalog builtin, {} rings, {} modules, built in {} ms",
        catalog.rings.len(),
        catalog.modules.len(),
        build_time.as_millis()
    );

    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let c = &catalog;
    // (id, description, check, runtime limit, whether the catalog build counts toward it)
    let criteria: Vec<(u32, &str, Check, Option<Duration>, bool)> = vec![
        (1, "Z/4 classification", Box::new(integers_mod_four), Some(Duration::from_secs(1)), false),
        (2, "uppertri(gf(2),2) classification", Box::new(upper_triangular_gf2), Some(Duration::from_secs(5)), false),
        (3, "uppertri(S,2) of order 512", Box::new(upper_triangular_over_s), Some(Duration::from_secs(300)), false),
        (4, "unit regular <-> special clean on the catalog", Box::new(move || unit_regular_iff_special_clean(c)), Some(Duration::from_secs(120)), true),
        (5, "abelian Rickart <-> special almost clean, witnesses", Box::new(move || abelian_rickart(c)), None, false),
        (6, "uniqueness of special decompositions", Box::new(move || uniqueness(c)), None, false),
        (7, "QC + nonsingular rings are left and right Rickart", Box::new(move || qc_nonsingular_rickart(c)), None, false),
        (8, "star claims and the swap involution", Box::new(move || star_rings_and_swap(c)), None, false),
        (9, "module suite and End(R_R) = R", Box::new(move || module_suite(c)), Some(Duration::from_secs(120)), true),
        (10, "unit-regularity oracles and regular = units", Box::new(move || unit_regular_oracles(c)), None, false),
    ];

    let mut failed = 0;
    for (id, what, check, limit, with_build) in &criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = t.elapsed() + if *with_build { build_time } else { Duration::ZERO };
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {} ms, limit {} ms", elapsed.as_millis(), l.as_millis())),
            (o, _) => o,
        };
        let ms = elapsed.as_millis();
        match outcome {
            Ok(detail) => println!("criterion {id:>2}: PASS  {what} ({ms} ms): {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL  {what} ({ms} ms): {why}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
