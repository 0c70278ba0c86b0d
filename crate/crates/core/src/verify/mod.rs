//! Executable claims over catalogs of rings, modules and embedding pairs,
//! and a counterexample search over generated ring specs.

mod catalog;
mod claims;
mod predicate;
mod search;

use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::RingReport;
use crate::budget::Budgets;
use crate::modlab::{module_class, EndoDecomposition, ModuleClassReport, ModuleError, ModuleFacts};

pub use catalog::{
    dual_numbers_gf2, Catalog, CatalogError, Duplicate, EmbeddingPair, ModuleEntry, RingEntry, PAIRS_FILE,
    REGULAR_MODULE_MAX_ORDER,
};
pub use claims::{claim, claims, select_claims, Claim, Scope, LIMITATIONS};
pub use predicate::{parse_predicate, parse_predicate_in, Predicate, PredicateError};
pub use search::{enumerate_specs, search_counterexamples, Finding, SearchConfig, SearchOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "hypothesis-not-met")]
    HypothesisNotMet,
    #[serde(rename = "VIOLATED")]
    Violated,
    #[serde(rename = "skipped")]
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
            Verdict::Violated => "VIOLATED",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub claim: String,
    pub instance: String,
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub catalog: String,
    pub catalog_digest: String,
    pub budgets: Budgets,
    pub results: Vec<InstanceResult>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.results.iter().filter(|r| r.verdict == v).count()
    }

    pub fn violations(&self) -> impl Iterator<Item = &InstanceResult> {
        self.results.iter().filter(|r| r.verdict == Verdict::Violated)
    }

    pub fn for_claim<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a InstanceResult> + 'a {
        self.results.iter().filter(move |r| r.claim == id)
    }

    pub fn verdict(&self, claim: &str, instance: &str) -> Option<Verdict> {
        self.results.iter().find(|r| r.claim == claim && r.instance == instance).map(|r| r.verdict)
    }

    /// 0 without violations or skips, 2 with violations, 3 with skips only.
    pub fn exit_code(&self) -> i32 {
        if self.count(Verdict::Violated) > 0 {
            2
        } else if self.count(Verdict::Skipped) > 0 {
            3
        } else {
            0
        }
    }

    /// The report with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> SuiteReport {
        let mut r = self.clone();
        r.results.iter_mut().for_each(|x| x.millis = 0);
        r
    }
}

/// Module data shared by the module claims.
#[derive(Debug)]
pub struct ModuleAnalysis {
    pub facts: ModuleFacts,
    pub report: ModuleClassReport,
    pub decompositions: Vec<Result<EndoDecomposition, ModuleError>>,
}

/// Lazily computed, shared analyses of every catalog member.
pub struct Workbench<'c> {
    pub catalog: &'c Catalog,
    pub budgets: Budgets,
    rings: Vec<OnceLock<Result<Arc<RingReport>, String>>>,
    modules: Vec<OnceLock<Result<Arc<ModuleAnalysis>, String>>>,
}

impl<'c> Workbench<'c> {
    pub fn new(catalog: &'c Catalog, budgets: &Budgets) -> Self {
        Workbench {
            catalog,
            budgets: *budgets,
            rings: catalog.rings.iter().map(|_| OnceLock::new()).collect(),
            modules: catalog.modules.iter().map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn ring(&self, i: usize) -> Result<Arc<RingReport>, String> {
        self.rings[i]
            .get_or_init(|| {
                let facts = (*self.catalog.rings[i].facts).clone();
                RingReport::from_facts(facts, &self.budgets).map(Arc::new).map_err(|e| e.to_string())
            })
            .clone()
    }

    pub fn module(&self, i: usize) -> Result<Arc<ModuleAnalysis>, String> {
        self.modules[i]
            .get_or_init(|| {
                let facts = ModuleFacts::new((*self.catalog.modules[i].module).clone());
                let report = module_class(&facts, &self.budgets).map_err(|e| e.to_string())?;
                let decompositions = report.endo_decompositions(&facts);
                Ok(Arc::new(ModuleAnalysis { facts, report, decompositions }))
            })
            .clone()
    }

    /// Ring report for a catalog name.
    pub fn ring_named(&self, name: &str) -> Option<Result<Arc<RingReport>, String>> {
        self.catalog.ring_index(name).map(|i| self.ring(i))
    }
}

/// Run `claims` over every applicable catalog instance. Results are ordered
/// by claim, then by catalog index.
pub fn run_claims(catalog: &Catalog, claims: &[&Claim], budgets: &Budgets) -> SuiteReport {
    let wb = Workbench::new(catalog, budgets);
    run_claims_on(&wb, claims)
}

pub fn run_claims_on(wb: &Workbench<'_>, claims: &[&Claim]) -> SuiteReport {
    let jobs: Vec<(&Claim, claims::Target)> =
        claims.iter().flat_map(|c| c.targets(wb.catalog).into_iter().map(move |t| (*c, t))).collect();
    let results = jobs
        .par_iter()
        .map(|(c, t)| {
            let start = Instant::now();
            let (verdict, witness) = c.evaluate(wb, *t);
            InstanceResult {
                claim: c.id.to_string(),
                instance: t.name(wb.catalog).to_string(),
                verdict,
                witness,
                millis: start.elapsed().as_millis() as u64,
            }
        })
        .collect();
    let mut notes: Vec<String> = wb
        .catalog
        .duplicates
        .iter()
        .map(|d| format!("{} and {} share fingerprint {}", d.first, d.second, d.fingerprint))
        .collect();
    notes.extend(LIMITATIONS.iter().map(|s| s.to_string()));
    SuiteReport {
        catalog: wb.catalog.name.clone(),
        catalog_digest: wb.catalog.digest(),
        budgets: wb.budgets,
        results,
        notes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown claim `{0}`")]
pub struct UnknownClaim(pub String);

/// Run one claim id, or every claim whose id extends `selector` by `-suffix`.
pub fn run_claim(selector: &str, catalog: &Catalog, budgets: &Budgets) -> Result<SuiteReport, UnknownClaim> {
    let selected = select_claims(selector);
    if selected.is_empty() {
        return Err(UnknownClaim(selector.to_string()));
    }
    Ok(run_claims(catalog, &selected, budgets))
}
