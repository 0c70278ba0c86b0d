use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use ringlab::decomp::{decompositions, rickart_witness, DecompKind, Decomposition};
use ringlab::elements::RingFacts;
use ringlab::lattice::{cs_conditions, right_ideals, singular_ideal, ClassError};
use ringlab::modlab::{module_class, ModuleFacts};
use ringlab::report::Flag;
use ringlab::verify::{
    claims, parse_predicate, run_claims, search_counterexamples, select_claims, Catalog, Claim, SearchConfig, Verdict,
};
use ringlab::{Elem, RingReport};

use crate::input::{load, module_failure};
use crate::{Context, Failure, InputArgs};

#[derive(Debug, Clone, Serialize)]
struct FlagRow {
    name: String,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

fn row(name: &str, f: &Flag) -> FlagRow {
    FlagRow { name: name.to_string(), holds: f.holds, witness: f.witness.as_ref().map(|w| w.to_string()) }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn flag_table(out: &mut String, rows: &[FlagRow]) {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in rows {
        let _ = write!(out, "{:width$}  {}", r.name, yes_no(r.holds));
        if let Some(w) = &r.witness {
            let _ = write!(out, " [{w}]");
        }
        out.push('\n');
    }
}

fn list(v: &[Elem]) -> String {
    format!("{{{}}}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn emit(ctx: &Context, doc: &Value, text: String) {
    if ctx.json {
        println!("{}", serde_json::to_string_pretty(doc).expect("json output"));
    } else {
        print!("{text}");
    }
}

fn class_failure(e: ClassError) -> Failure {
    match e {
        ClassError::Module(e) => module_failure(e),
        e @ ClassError::Mismatch(_) => Failure::Violation(e.to_string()),
    }
}

/// Ring flags in display order: classes (with combined `rickart` and
/// `commutative`), then the clean family.
fn ring_rows(r: &RingReport) -> Vec<FlagRow> {
    let mut rows = Vec::new();
    for (name, f) in r.class.flags() {
        rows.push(row(name, f));
        if name == "rickart_left" {
            rows.push(row("rickart", &r.flag("rickart").expect("rickart flag")));
        }
        if name == "reduced" {
            rows.push(row("commutative", &r.flag("commutative").expect("commutative flag")));
        }
    }
    rows.extend(r.cleanness.flags().into_iter().map(|(n, f)| row(n, f)));
    rows
}

pub fn classify(ctx: &Context, input: &InputArgs) -> Result<u8, Failure> {
    let loaded = load(ctx, input)?;
    let (name, ring) = loaded.ring(input.ring.as_deref())?;
    let report = RingReport::new(ring, &ctx.budgets).map_err(class_failure)?;
    let rows = ring_rows(&report);
    let e = &report.elements;
    let doc = json!({
        "ring": name,
        "label": report.label,
        "order": e.order,
        "fingerprint": report.fingerprint.hash(),
        "elements": e,
        "ideals": report.class.ideals,
        "summands": report.class.summands,
        "singular_ideal": report.class.singular_ideal,
        "flags": rows,
    });
    let mut text = String::new();
    let _ = writeln!(text, "ring         {name}");
    let _ = writeln!(text, "order        {}", e.order);
    let _ = writeln!(text, "fingerprint  {}", report.fingerprint.hash());
    let _ = writeln!(text, "idempotents  {}", list(&e.idempotents));
    let _ = writeln!(text, "units {}  regular {}  central {}", e.units, e.regular, e.central);
    if let Some(p) = &e.projections {
        let _ = writeln!(text, "projections  {}", list(p));
    }
    let _ = writeln!(
        text,
        "right ideals {}  summands {}  singular ideal {}",
        report.class.ideals,
        report.class.summands,
        list(&report.class.singular_ideal)
    );
    text.push('\n');
    flag_table(&mut text, &rows);
    emit(ctx, &doc, text);
    Ok(0)
}

fn decomposition_line(d: &Decomposition, star: bool) -> String {
    let mut s = format!(
        "e={} u={}  unit={} regular={} special={}",
        d.idempotent,
        d.complement,
        yes_no(d.u_is_unit),
        yes_no(d.u_is_regular),
        yes_no(d.special)
    );
    if star {
        let _ = write!(s, " projection={}", yes_no(d.e_is_projection));
    }
    s
}

pub fn decompose(ctx: &Context, input: &InputArgs, element: usize, kind: &str, witness: bool) -> Result<u8, Failure> {
    let loaded = load(ctx, input)?;
    let (name, ring) = loaded.ring(input.ring.as_deref())?;
    if element >= ring.order() {
        return Err(Failure::Input(format!("element {element} is not in a ring of order {}", ring.order())));
    }
    let facts = RingFacts::new(ring);
    if witness {
        let d = rickart_witness(&facts, element).map_err(|e| Failure::Violation(e.to_string()))?;
        let doc = json!({ "ring": name, "element": element, "witness": "rickart", "decomposition": d });
        emit(ctx, &doc, format!("{}\n", decomposition_line(&d, false)));
        return Ok(0);
    }
    let kind = DecompKind::parse(kind).ok_or_else(|| Failure::Input(format!("unknown decomposition kind `{kind}`")))?;
    if kind.star && !facts.ring.has_star() {
        return Err(Failure::Input(format!("{} needs a ring with an involution", kind.name())));
    }
    let ds = decompositions(&facts, element, kind);
    let doc = json!({ "ring": name, "element": element, "kind": kind.name(), "decompositions": ds });
    let text = if ds.is_empty() {
        "none\n".to_string()
    } else {
        ds.iter().map(|d| decomposition_line(d, kind.star) + "\n").collect()
    };
    emit(ctx, &doc, text);
    Ok(0)
}

pub fn lattice(ctx: &Context, input: &InputArgs) -> Result<u8, Failure> {
    let loaded = load(ctx, input)?;
    let (name, ring) = loaded.ring(input.ring.as_deref())?;
    let facts = RingFacts::new(ring);
    let lat = right_ideals(&facts, ctx.budgets.max_ideals).map_err(module_failure)?;
    let cs = cs_conditions(&lat, ctx.budgets.max_assignments).map_err(module_failure)?;
    let (z, nonsingular) = singular_ideal(&facts);
    let rows = vec![
        row("C1", &cs.c1),
        row("C2", &cs.c2),
        row("C3", &cs.c3),
        row("quasi_continuous", &cs.quasi_continuous()),
        row("continuous", &cs.continuous()),
        row("right_nonsingular", &nonsingular),
    ];
    let ideals: Vec<Value> = lat
        .ideals
        .iter()
        .map(|i| {
            json!({
                "members": i.to_vec(),
                "summand": i.is_summand() == Some(true),
                "idempotents": i.generating_idempotents().unwrap_or(&[]),
            })
        })
        .collect();
    let doc = json!({
        "ring": name,
        "count": lat.len(),
        "ideals": ideals,
        "singular_ideal": z.to_vec(),
        "flags": rows,
    });
    let mut text = String::new();
    let _ = writeln!(text, "right ideals of {name}: {}", lat.len());
    let shown: Vec<String> = lat.ideals.iter().map(|i| list(&i.to_vec())).collect();
    let width = shown.iter().map(String::len).max().unwrap_or(0);
    for (i, s) in lat.ideals.iter().zip(&shown) {
        match i.generating_idempotents() {
            Some(g) if !g.is_empty() => {
                let _ = writeln!(text, "  {s:width$}  summand, e in {}", list(g));
            }
            _ => {
                let _ = writeln!(text, "  {s}");
            }
        }
    }
    let _ = writeln!(text, "singular ideal {}\n", list(&z.to_vec()));
    flag_table(&mut text, &rows);
    emit(ctx, &doc, text);
    Ok(0)
}

pub fn module(
    ctx: &Context,
    input: &InputArgs,
    name: Option<&str>,
    expr: Option<&str>,
    endos: bool,
) -> Result<u8, Failure> {
    let loaded = load(ctx, input)?;
    let m = loaded.module(ctx, input.ring.as_deref(), name, expr)?;
    let mf = ModuleFacts::new(Arc::clone(&m));
    let report = module_class(&mf, &ctx.budgets).map_err(module_failure)?;
    let mut rows: Vec<FlagRow> = report.flags().into_iter().map(|(n, f)| row(n, f)).collect();
    rows.push(row("essential_monos_are_isos", &report.essential_monos_are_isos(&mf)));
    let decomps: Vec<Value> = if endos {
        report
            .endo_decompositions(&mf)
            .into_iter()
            .enumerate()
            .map(|(f, d)| match d {
                Ok(d) => json!(d),
                Err(_) => json!({ "endomorphism": f, "idempotent": null }),
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut doc = json!({
        "module": m.label(),
        "ring": m.ring().label(),
        "order": report.order,
        "submodules": report.submodules,
        "summands": report.summands,
        "end_order": report.end_order,
        "singular_submodule": report.singular,
        "flags": rows,
    });
    if endos {
        doc["endomorphisms"] = Value::Array(decomps.clone());
    }
    let mut text = String::new();
    let _ = writeln!(text, "module       {}", m.label());
    let _ = writeln!(text, "ring         {}", m.ring().label());
    let _ = writeln!(text, "order        {}", report.order);
    let _ = writeln!(text, "submodules {}  summands {}  |End| {}", report.submodules, report.summands, report.end_order);
    let _ = writeln!(text, "singular submodule {}\n", list(&report.singular));
    flag_table(&mut text, &rows);
    if endos {
        text.push('\n');
        for d in &decomps {
            let f = &d["endomorphism"];
            if d["idempotent"].is_null() {
                let _ = writeln!(text, "f={f}  none");
            } else {
                let kind = d["kind"].as_str().unwrap_or("");
                let _ = writeln!(text, "f={f}  e={} u={}  {kind}", d["idempotent"], d["complement"]);
            }
        }
    }
    emit(ctx, &doc, text);
    Ok(0)
}

fn load_catalog(ctx: &Context, which: &str) -> Result<Catalog, Failure> {
    let c = if which == "builtin" {
        Catalog::builtin(&ctx.budgets)
    } else {
        Catalog::load(Path::new(which), &ctx.budgets)
    };
    c.map_err(|e| Failure::Input(e.to_string()))
}

fn list_claims(ctx: &Context) -> Result<u8, Failure> {
    let all = claims();
    let doc = serde_json::to_value(all).expect("claims serialize");
    let width = all.iter().map(|c| c.id.len()).max().unwrap_or(0);
    let mut text = String::new();
    for c in all {
        let scope = serde_json::to_value(c.scope).expect("scope");
        let _ = writeln!(text, "{:width$}  {:17}  {}", c.id, scope.as_str().unwrap_or(""), c.statement);
    }
    emit(ctx, &doc, text);
    Ok(0)
}

pub fn verify(
    ctx: &Context,
    all: bool,
    selectors: &[String],
    catalog: &str,
    list: bool,
    summary: bool,
    no_timing: bool,
) -> Result<u8, Failure> {
    if list {
        return list_claims(ctx);
    }
    let selected: Vec<&Claim> = if all {
        claims().iter().collect()
    } else if selectors.is_empty() {
        return Err(Failure::Input("pass --all, --claim ID or --list".into()));
    } else {
        let mut v: Vec<&Claim> = Vec::new();
        for s in selectors {
            let found = select_claims(s);
            if found.is_empty() {
                return Err(Failure::Input(format!("unknown claim `{s}`")));
            }
            for c in found {
                if !v.iter().any(|x| x.id == c.id) {
                    v.push(c);
                }
            }
        }
        v
    };
    let cat = load_catalog(ctx, catalog)?;
    let report = run_claims(&cat, &selected, &ctx.budgets);
    let report = if no_timing { report.without_timing() } else { report };
    let doc = serde_json::to_value(&report).expect("report serializes");

    let mut text = String::new();
    let _ = writeln!(
        text,
        "catalog {} (digest {}): {} rings, {} modules, {} pairs",
        report.catalog,
        report.catalog_digest,
        cat.rings.len(),
        cat.modules.len(),
        cat.pairs.len()
    );
    let id_w = selected.iter().map(|c| c.id.len()).max().unwrap_or(0);
    let inst_w = report.results.iter().map(|r| r.instance.len()).max().unwrap_or(0);
    for r in &report.results {
        if summary && matches!(r.verdict, Verdict::Holds | Verdict::HypothesisNotMet) {
            continue;
        }
        let _ = write!(text, "{:id_w$}  {:inst_w$}  {}", r.claim, r.instance, r.verdict.as_str());
        if let Some(w) = &r.witness {
            let _ = write!(text, "  {w}");
        }
        text.push('\n');
    }
    text.push('\n');
    let _ = writeln!(text, "{:id_w$}  holds  hyp-not-met  violated  skipped", "claim");
    for c in &selected {
        let n = |v: Verdict| report.for_claim(c.id).filter(|r| r.verdict == v).count();
        let _ = writeln!(
            text,
            "{:id_w$}  {:5}  {:11}  {:8}  {:7}",
            c.id,
            n(Verdict::Holds),
            n(Verdict::HypothesisNotMet),
            n(Verdict::Violated),
            n(Verdict::Skipped)
        );
    }
    let _ = writeln!(
        text,
        "total: {} instances, {} holds, {} hypothesis-not-met, {} VIOLATED, {} skipped",
        report.results.len(),
        report.count(Verdict::Holds),
        report.count(Verdict::HypothesisNotMet),
        report.count(Verdict::Violated),
        report.count(Verdict::Skipped)
    );
    for note in &report.notes {
        let _ = writeln!(text, "note: {note}");
    }
    emit(ctx, &doc, text);
    Ok(report.exit_code() as u8)
}

pub fn search(ctx: &Context, predicate: &str, cfg: &SearchConfig) -> Result<u8, Failure> {
    let pred = parse_predicate(predicate).map_err(|e| Failure::Input(e.to_string()))?;
    let outcome = search_counterexamples(&pred, cfg, &ctx.budgets);
    let doc = serde_json::to_value(&outcome).expect("outcome serializes");
    let mut text = String::new();
    let _ = writeln!(text, "searched {} specs of order <= {} for `{}`", outcome.examined, cfg.max_order, outcome.predicate);
    for f in &outcome.findings {
        let _ = write!(
            text,
            "{}  order {}  fingerprint {}  reverified {}",
            f.spec,
            f.order,
            f.fingerprint.hash(),
            yes_no(f.reverified)
        );
        if let Some((ring, report)) = &f.files {
            let _ = write!(text, "  {} {}", ring.display(), report.display());
        }
        text.push('\n');
    }
    let _ = writeln!(text, "found {}{}", outcome.findings.len(), if outcome.partial { " (partial)" } else { "" });
    for (spec, why) in &outcome.skipped {
        let _ = writeln!(text, "skipped {spec}: {why}");
    }
    for e in &outcome.errors {
        let _ = writeln!(text, "error: {e}");
    }
    emit(ctx, &doc, text);
    Ok(if !outcome.errors.is_empty() {
        1
    } else if !outcome.skipped.is_empty() {
        3
    } else {
        0
    })
}

pub fn export_catalog(ctx: &Context, dir: &Path) -> Result<u8, Failure> {
    let cat = load_catalog(ctx, "builtin")?;
    cat.save(dir).map_err(|e| Failure::Input(e.to_string()))?;
    let doc = json!({ "dir": dir, "rings": cat.rings.len(), "modules": cat.modules.len(), "pairs": cat.pairs.len() });
    let text = format!(
        "wrote {} rings, {} modules, {} pairs to {}\n",
        cat.rings.len(),
        cat.modules.len(),
        cat.pairs.len(),
        dir.display()
    );
    emit(ctx, &doc, text);
    Ok(0)
}
