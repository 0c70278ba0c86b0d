//! Enumerate small ring specs, classify them and keep those satisfying a predicate.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::RingReport;
use crate::budget::Budgets;
use crate::construct::{construct, Environment};
use crate::dsl::{parse_program, InvolutionKind, RingExpr, RingSpec, Statement};
use crate::fingerprint::Fingerprint;
use crate::ring::FinRing;

use super::predicate::Predicate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub max_order: usize,
    /// Also try every structural involution each ring admits. Predicates
    /// naming a star flag are only tried on rings with an involution.
    pub include_star: bool,
    /// Examine a seeded random subset of this size instead of everything.
    pub sample: Option<usize>,
    pub seed: u64,
    /// Stop after this many specs; the outcome is then partial.
    pub max_instances: Option<usize>,
    /// Directory for `.ring` / `.report` files of each finding.
    pub out_dir: Option<PathBuf>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_order: 16, include_star: false, sample: None, seed: 0, max_instances: None, out_dir: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub spec: String,
    pub order: usize,
    pub fingerprint: Fingerprint,
    pub flags: Vec<(String, bool)>,
    /// Files written for this finding, if any.
    pub files: Option<(PathBuf, PathBuf)>,
    /// The spec, read back (from its file when persisted) and reclassified, satisfies the predicate.
    pub reverified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub predicate: String,
    pub examined: usize,
    pub findings: Vec<Finding>,
    /// Specs whose classification ran out of budget, with the reason.
    pub skipped: Vec<(String, String)>,
    pub partial: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

fn prime_powers(max: usize) -> Vec<(usize, usize)> {
    let is_prime = |n: usize| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    let mut out = Vec::new();
    for p in (2..=max).filter(|&p| is_prime(p)) {
        let mut q = p * p;
        let mut k = 2;
        while q <= max {
            out.push((p, k));
            q *= p;
            k += 1;
        }
    }
    out
}

/// Plain specs of order at most `max_order`: `zmod`, non-prime `gf`, and
/// closure under `matrix`, `uppertri` (sizes 2 and 3) and `product`.
/// Sorted by (order, text); each text occurs once.
pub fn enumerate_specs(max_order: usize) -> Vec<(usize, RingExpr)> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut all: Vec<(usize, RingExpr)> = Vec::new();
    let mut push = |order: usize, e: RingExpr, all: &mut Vec<(usize, RingExpr)>| {
        if seen.insert(e.to_string()) {
            all.push((order, e));
            true
        } else {
            false
        }
    };
    for n in 1..=max_order {
        push(n, RingExpr::Zmod(n), &mut all);
    }
    for (p, k) in prime_powers(max_order) {
        push(p.pow(k as u32), RingExpr::Gf { p, k }, &mut all);
    }
    let mut frontier: Vec<(usize, RingExpr)> = all.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let bases: Vec<(usize, RingExpr)> = all.iter().filter(|(o, _)| *o > 1).cloned().collect();
        for (o, e) in frontier.iter().filter(|(o, _)| *o > 1) {
            for k in [2usize, 3] {
                if let Some(m) = o.checked_pow((k * k) as u32).filter(|&m| m <= max_order) {
                    let x = RingExpr::Matrix(Box::new(e.clone()), k);
                    if push(m, x.clone(), &mut all) {
                        next.push((m, x));
                    }
                }
                if let Some(m) = o.checked_pow((k * (k + 1) / 2) as u32).filter(|&m| m <= max_order) {
                    let x = RingExpr::UpperTri(Box::new(e.clone()), k);
                    if push(m, x.clone(), &mut all) {
                        next.push((m, x));
                    }
                }
            }
            for (bo, b) in &bases {
                let m = o * bo;
                if m > max_order {
                    continue;
                }
                // products up to factor order, smaller text first
                let (x, y) = if (e.to_string()) <= b.to_string() { (e, b) } else { (b, e) };
                let p = RingExpr::Product(Box::new(x.clone()), Box::new(y.clone()));
                if push(m, p.clone(), &mut all) {
                    next.push((m, p));
                }
            }
        }
        frontier = next;
    }
    all.sort_by(|(oa, a), (ob, b)| oa.cmp(ob).then_with(|| a.to_string().cmp(&b.to_string())));
    all
}

/// Structural involutions that attach to `ring`.
fn star_variants(expr: &RingExpr, ring: &FinRing) -> Vec<InvolutionKind> {
    let mut kinds = Vec::new();
    if ring.is_commutative() {
        kinds.push(InvolutionKind::Identity);
    }
    if matches!(expr, RingExpr::Matrix(..)) {
        kinds.push(InvolutionKind::Transpose);
    }
    if matches!(expr, RingExpr::Product(a, b) if a == b) {
        kinds.push(InvolutionKind::Swap);
    }
    kinds
        .into_iter()
        .filter(|k| crate::construct::attach_involution(ring.clone(), k).is_ok())
        .collect()
}

fn candidate_specs(cfg: &SearchConfig, star: bool, budgets: &Budgets) -> Vec<RingSpec> {
    let mut specs = Vec::new();
    let env = Environment::default();
    for (_, expr) in enumerate_specs(cfg.max_order.min(budgets.max_order)) {
        if star {
            if let Ok(ring) = crate::construct::construct_expr(&expr, &env, budgets.max_order) {
                for k in star_variants(&expr, &ring) {
                    specs.push(RingSpec { expr: expr.clone(), involution: Some(k) });
                }
            }
        }
        specs.push(RingSpec::plain(expr));
    }
    specs
}

enum Examined {
    Miss,
    Hit(Box<RingReport>),
    Skipped(String),
}

fn examine(spec: &RingSpec, pred: &Predicate, budgets: &Budgets) -> Examined {
    let ring = match construct(spec, &Environment::default(), budgets.max_order) {
        Ok(r) => r,
        Err(e) => return Examined::Skipped(e.to_string()),
    };
    match RingReport::new(ring, budgets) {
        Ok(rep) if pred.eval_report(&rep) => Examined::Hit(Box::new(rep)),
        Ok(_) => Examined::Miss,
        Err(e) => Examined::Skipped(e.to_string()),
    }
}

/// Classify generated specs and return those satisfying `pred`. Never fails:
/// budget exhaustion and the instance cap mark the outcome partial.
pub fn search_counterexamples(pred: &Predicate, cfg: &SearchConfig, budgets: &Budgets) -> SearchOutcome {
    let mut specs = candidate_specs(cfg, cfg.include_star || pred.mentions_star(), budgets);
    if pred.mentions_star() {
        specs.retain(|s| s.involution.is_some());
    }
    if let Some(n) = cfg.sample.filter(|&n| n < specs.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut picked = sample(&mut rng, specs.len(), n).into_vec();
        picked.sort_unstable();
        specs = picked.into_iter().map(|i| specs[i].clone()).collect();
    }
    let mut partial = false;
    if let Some(cap) = cfg.max_instances.filter(|&c| c < specs.len()) {
        specs.truncate(cap);
        partial = true;
    }
    let examined: Vec<Examined> = specs.par_iter().map(|s| examine(s, pred, budgets)).collect();

    let mut findings = Vec::new();
    let mut skipped = Vec::new();
    let mut errors = Vec::new();
    let mut ordinals: HashMap<String, usize> = HashMap::new();
    for (spec, result) in specs.iter().zip(examined) {
        match result {
            Examined::Miss => {}
            Examined::Skipped(why) => {
                partial = true;
                skipped.push((spec.to_string(), why));
            }
            Examined::Hit(rep) => {
                let hash = rep.fingerprint.hash();
                let ordinal = ordinals.entry(hash.clone()).or_insert(0);
                let stem = format!("{hash}_{ordinal}");
                *ordinal += 1;
                let files = match &cfg.out_dir {
                    Some(dir) => match persist(dir, &stem, spec, &rep) {
                        Ok(f) => Some(f),
                        Err(e) => {
                            errors.push(e);
                            None
                        }
                    },
                    None => None,
                };
                let reverified = reverify(spec, files.as_ref().map(|f| f.0.as_path()), pred, budgets);
                let flags =
                    pred.flags().into_iter().map(|n| (n.to_string(), rep.flag(n).is_some_and(|f| f.holds))).collect();
                findings.push(Finding {
                    spec: spec.to_string(),
                    order: rep.elements.order,
                    fingerprint: rep.fingerprint.clone(),
                    flags,
                    files,
                    reverified,
                });
            }
        }
    }
    SearchOutcome { predicate: pred.to_string(), examined: specs.len(), findings, skipped, partial, errors }
}

fn persist(dir: &Path, stem: &str, spec: &RingSpec, rep: &RingReport) -> Result<(PathBuf, PathBuf), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let ring_file = dir.join(format!("{stem}.ring"));
    let report_file = dir.join(format!("{stem}.report"));
    fs::write(&ring_file, format!("ring X = {spec}\n")).map_err(|e| format!("{}: {e}", ring_file.display()))?;
    let json = serde_json::to_string_pretty(rep).map_err(|e| e.to_string())?;
    fs::write(&report_file, json + "\n").map_err(|e| format!("{}: {e}", report_file.display()))?;
    Ok((ring_file, report_file))
}

/// Read the finding back (from disk when persisted), rebuild and reclassify it.
fn reverify(spec: &RingSpec, file: Option<&Path>, pred: &Predicate, budgets: &Budgets) -> bool {
    let spec = match file {
        Some(path) => {
            let Ok(text) = fs::read_to_string(path) else { return false };
            match parse_program(&text).ok().and_then(|p| p.statements.into_iter().next()) {
                Some(Statement::Ring { spec, .. }) => spec,
                _ => return false,
            }
        }
        None => spec.clone(),
    };
    matches!(examine(&spec, pred, budgets), Examined::Hit(_))
}
