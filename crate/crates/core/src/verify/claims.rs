//! The claim table. Each claim is a hypothesis and a conclusion over named
//! flags; ring flags come from [`RingReport`], plus a few element-level checks
//! computed here. Ids are stable interface names.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::analysis::RingReport;
use crate::decomp::rickart_witness;
use crate::dsl::parse_spec;
use crate::lattice::{is_essential, right_ideals, unit_regular_characterizations};
use crate::modlab::{regular_endomorphism_iso, HomMode, HomSearch, ModuleFacts, MonoKind};
use crate::report::{Flag, Witness};
use crate::ring::Elem;

use super::catalog::{Catalog, EmbeddingPair};
use super::predicate::{parse_predicate_in, Predicate};
use super::{ModuleAnalysis, Verdict, Workbench};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// Every catalog ring, with or without involution.
    Rings,
    /// Catalog rings carrying an involution.
    StarRings,
    Modules,
    RingsAndModules,
    /// Embedding pairs `sub -> over`.
    Pairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Ring(usize),
    Module(usize),
    Pair(usize),
}

impl Target {
    pub fn name<'a>(&self, c: &'a Catalog) -> &'a str {
        match *self {
            Target::Ring(i) => &c.rings[i].name,
            Target::Module(i) => &c.modules[i].name,
            Target::Pair(i) => &c.pairs[i].name,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub scope: Scope,
    pub hypothesis: Option<&'static str>,
    pub conclusion: &'static str,
    /// Only rings of at most this order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    /// Only rings whose spec is this one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<&'static str>,
}

/// Element-level ring checks available to claims besides the report flags.
pub const DERIVED_RING_FLAGS: &[&str] = &[
    "rickart_witness_valid",
    "idempotent_plus_mono",
    "mono_complements_regular",
    "regular_elements_are_units",
    "end_regular_iso",
    "unit_regular_tests_agree",
    "singular_homs_vanish",
    "idempotents_are_projections",
];

pub const MODULE_FLAGS: &[&str] = &[
    "C1",
    "C2",
    "C3",
    "CS",
    "quasi_continuous",
    "continuous",
    "nonsingular",
    "clean",
    "almost_clean",
    "essential_monos_are_isos",
    "idempotent_plus_mono",
    "idempotent_plus_essential_mono",
    "summands_match_idempotent_images",
];

/// Pair flags; `sub_<flag>` and `over_<flag>` read ring flags of either side.
pub const PAIR_FLAGS: &[&str] = &["embedding", "star_preserving", "same_idempotents", "same_projections"];

pub const LIMITATIONS: &[&str] = &[
    "whether condition (C) (every essential monomorphism in End(M) is an isomorphism) makes an almost clean \
     module clean is not decidable by finite search: for finite modules End(M) is finite, its regular \
     elements are units, and almost clean coincides with clean",
    "embedding claims are checked on the supplied finite pairs only; no ring of quotients is constructed",
];

fn ring_vocab(name: &str) -> bool {
    RingReport::known_flags().contains(&name) || DERIVED_RING_FLAGS.contains(&name)
}

fn module_vocab(name: &str) -> bool {
    MODULE_FLAGS.contains(&name)
}

fn pair_vocab(name: &str) -> bool {
    PAIR_FLAGS.contains(&name)
        || name.strip_prefix("sub_").or_else(|| name.strip_prefix("over_")).is_some_and(ring_vocab)
}

const fn ring_claim(
    id: &'static str,
    statement: &'static str,
    hypothesis: Option<&'static str>,
    conclusion: &'static str,
) -> Claim {
    Claim { id, statement, scope: Scope::Rings, hypothesis, conclusion, max_order: None, example: None }
}

const fn scoped(mut c: Claim, scope: Scope) -> Claim {
    c.scope = scope;
    c
}

const fn example(mut c: Claim, spec: &'static str) -> Claim {
    c.example = Some(spec);
    c
}

const fn small(mut c: Claim, order: usize) -> Claim {
    c.max_order = Some(order);
    c
}

static CLAIMS: &[Claim] = &[
    ring_claim("T-CK", "A ring is unit-regular if and only if it is special clean.", None, "unit_regular <-> special_clean"),
    ring_claim(
        "T-3.1-fwd",
        "An abelian right Rickart ring is special almost clean; the decomposition a = e + (a - e) with \
         ann_r(a) = eR is special almost clean for every a.",
        Some("abelian & rickart_right"),
        "special_almost_clean & rickart_witness_valid",
    ),
    ring_claim(
        "T-3.1-bwd",
        "An abelian special almost clean ring is right and left Rickart.",
        Some("abelian & special_almost_clean"),
        "rickart_right & rickart_left",
    ),
    ring_claim(
        "P-4.1",
        "For abelian rings: unit-regular, special clean and uniquely special clean coincide.",
        Some("abelian"),
        "unit_regular <-> special_clean <-> uniquely_special_clean",
    ),
    ring_claim(
        "C-3.3",
        "For abelian right quasi-continuous rings: right nonsingular if and only if Rickart.",
        Some("abelian & quasi_continuous"),
        "right_nonsingular <-> rickart",
    ),
    ring_claim(
        "C-3.4",
        "A right quasi-continuous right nonsingular ring is right and left Rickart.",
        Some("quasi_continuous & right_nonsingular"),
        "rickart_right & rickart_left",
    ),
    ring_claim(
        "C-4.2",
        "An abelian right nonsingular right quasi-continuous ring is uniquely special almost clean.",
        Some("abelian & right_nonsingular & quasi_continuous"),
        "uniquely_special_almost_clean",
    ),
    ring_claim(
        "C-4.3",
        "For abelian right quasi-continuous rings: right nonsingular, Rickart and uniquely special almost \
         clean coincide.",
        Some("abelian & quasi_continuous"),
        "right_nonsingular <-> rickart <-> uniquely_special_almost_clean",
    ),
    ring_claim(
        "P-4.4",
        "For abelian right quasi-continuous right nonsingular rings: right continuous, regular, unit-regular, \
         special clean, uniquely special clean, right morphic and left morphic coincide.",
        Some("abelian & quasi_continuous & right_nonsingular"),
        "continuous <-> vn_regular <-> unit_regular <-> special_clean <-> uniquely_special_clean \
         <-> morphic_right <-> morphic_left",
    ),
    scoped(
        ring_claim(
            "T-2.5",
            "A quasi-continuous nonsingular module has an almost clean endomorphism ring.",
            Some("quasi_continuous & nonsingular"),
            "almost_clean",
        ),
        Scope::Modules,
    ),
    scoped(
        ring_claim(
            "P-2.4",
            "Every endomorphism of a quasi-continuous module is an idempotent plus an essential monomorphism.",
            Some("quasi_continuous"),
            "idempotent_plus_essential_mono",
        ),
        Scope::Modules,
    ),
    ring_claim(
        "T-2.6",
        "In a right CS right nonsingular ring every element is an idempotent plus a regular element; any \
         split L_a = L_e + L_r with L_r injective has r regular.",
        Some("CS & right_nonsingular"),
        "almost_clean & idempotent_plus_mono & mono_complements_regular",
    ),
    scoped(
        ring_claim(
            "T-6.2",
            "An abelian *-ring is a Rickart *-ring if and only if it is special almost *-clean.",
            Some("abelian"),
            "rickart_star <-> special_almost_star_clean",
        ),
        Scope::StarRings,
    ),
    scoped(
        ring_claim(
            "T-6.3",
            "An abelian *-ring is *-regular if and only if it is special *-clean.",
            Some("abelian"),
            "star_regular <-> special_star_clean",
        ),
        Scope::StarRings,
    ),
    scoped(
        ring_claim(
            "C-6.4",
            "An abelian *-regular ring is uniquely special *-clean; an abelian Rickart *-ring is uniquely \
             special almost *-clean.",
            Some("abelian"),
            "(star_regular -> uniquely_special_star_clean) & (rickart_star -> uniquely_special_almost_star_clean)",
        ),
        Scope::StarRings,
    ),
    scoped(
        ring_claim("INV-C2C3", "(C2) implies (C3), for rings and modules.", None, "C2 -> C3"),
        Scope::RingsAndModules,
    ),
    ring_claim(
        "INV-FIN-REG",
        "In a finite ring regular elements are units, so each almost clean variant coincides with its clean \
         counterpart.",
        None,
        "regular_elements_are_units & (clean <-> almost_clean) & (special_clean <-> special_almost_clean) \
         & (uniquely_special_clean <-> uniquely_special_almost_clean) & (star_clean <-> almost_star_clean) \
         & (special_star_clean <-> special_almost_star_clean)",
    ),
    scoped(
        ring_claim(
            "CS-MONO",
            "Every endomorphism of a CS module is an idempotent plus a monomorphism.",
            Some("CS"),
            "idempotent_plus_mono",
        ),
        Scope::RingsAndModules,
    ),
    ring_claim(
        "QCNS-ALMOST",
        "A right quasi-continuous right nonsingular ring is almost clean.",
        Some("quasi_continuous & right_nonsingular"),
        "almost_clean",
    ),
    scoped(
        ring_claim(
            "EMB",
            "A ring embedded in a clean ring with the same idempotents is almost clean, and clean if regular.",
            Some("embedding & same_idempotents & over_clean"),
            "sub_almost_clean & (sub_vn_regular -> sub_clean)",
        ),
        Scope::Pairs,
    ),
    scoped(
        ring_claim(
            "EMB-UR",
            "A ring embedded in a unit-regular ring with the same idempotents is special almost clean.",
            Some("embedding & same_idempotents & over_unit_regular"),
            "sub_special_almost_clean",
        ),
        Scope::Pairs,
    ),
    scoped(
        ring_claim(
            "EMB-STAR",
            "A *-ring embedded in a (special) *-clean ring with the same projections is (special) almost \
             *-clean, and (special) *-clean if regular.",
            Some("embedding & star_preserving & same_projections & over_star_clean"),
            "sub_almost_star_clean & (sub_vn_regular -> sub_star_clean) & (over_special_star_clean -> \
             sub_special_almost_star_clean & (sub_vn_regular -> sub_special_star_clean))",
        ),
        Scope::Pairs,
    ),
    example(
        ring_claim(
            "EX-Z4",
            "Z/4 is quasi-continuous and clean, not right nonsingular, not right Rickart, and not special \
             almost clean.",
            None,
            "clean & almost_clean & quasi_continuous & !right_nonsingular & !rickart_right & !special_almost_clean",
        ),
        "zmod(4)",
    ),
    example(
        ring_claim(
            "EX-S",
            "Upper triangular 2x2 matrices over a field are clean, right CS and right nonsingular but not \
             right quasi-continuous.",
            None,
            "clean & CS & right_nonsingular & !quasi_continuous",
        ),
        "uppertri(gf(2), 2)",
    ),
    example(
        ring_claim(
            "EX-R",
            "Upper triangular 2x2 matrices over the upper triangular ring are almost clean but not right CS.",
            None,
            "almost_clean & !CS",
        ),
        "uppertri(uppertri(gf(2), 2), 2)",
    ),
    example(
        scoped(
            ring_claim(
                "EX-SWAP",
                "F2 x F2 with the swap involution is Rickart but neither a Rickart *-ring nor special almost \
                 *-clean.",
                None,
                "rickart & !rickart_star & !special_almost_star_clean",
            ),
            Scope::StarRings,
        ),
        "product(gf(2), gf(2)) with involution swap",
    ),
    scoped(
        ring_claim(
            "INV-QC-CONT",
            "A quasi-continuous module is continuous exactly when every essential monomorphism of it is onto.",
            Some("quasi_continuous"),
            "continuous <-> essential_monos_are_isos",
        ),
        Scope::Modules,
    ),
    small(
        ring_claim(
            "INV-SING-HOM",
            "There is no nonzero map from a singular cyclic module R/I (I essential) to a nonsingular catalog \
             module over R.",
            None,
            "singular_homs_vanish",
        ),
        16,
    ),
    scoped(
        ring_claim(
            "INV-STAR-PROJ",
            "In an abelian Rickart *-ring every idempotent is a projection.",
            Some("abelian & rickart_star"),
            "idempotents_are_projections",
        ),
        Scope::StarRings,
    ),
    small(
        ring_claim("INV-END-REG", "a -> L_a is a ring isomorphism from R onto End(R_R).", None, "end_regular_iso"),
        16,
    ),
    ring_claim(
        "INV-UR3",
        "a = aua (u a unit), a = eu and a = ue (e idempotent, u a unit) hold for the same elements.",
        None,
        "unit_regular_tests_agree",
    ),
    ring_claim(
        "INV-REG-CS",
        "For regular rings, right CS, right quasi-continuous and right continuous coincide.",
        Some("vn_regular"),
        "CS <-> quasi_continuous <-> continuous",
    ),
    ring_claim(
        "INV-ABEL-RICK",
        "An abelian ring is right Rickart if and only if it is left Rickart.",
        Some("abelian"),
        "rickart_right <-> rickart_left",
    ),
];

pub fn claims() -> &'static [Claim] {
    CLAIMS
}

pub fn claim(id: &str) -> Option<&'static Claim> {
    CLAIMS.iter().find(|c| c.id == id)
}

/// Exact id, or every id that extends `selector` with a `-suffix`.
pub fn select_claims(selector: &str) -> Vec<&'static Claim> {
    CLAIMS
        .iter()
        .filter(|c| c.id == selector || c.id.strip_prefix(selector).is_some_and(|rest| rest.starts_with('-')))
        .collect()
}

impl Claim {
    fn vocabulary(&self, target: Target) -> fn(&str) -> bool {
        match target {
            Target::Ring(_) => ring_vocab,
            Target::Module(_) => module_vocab,
            Target::Pair(_) => pair_vocab,
        }
    }

    pub fn hypothesis_for(&self, target: Target) -> Option<Predicate> {
        let vocab = self.vocabulary(target);
        self.hypothesis.map(|h| parse_predicate_in(h, &vocab).expect("claim hypothesis parses"))
    }

    pub fn conclusion_for(&self, target: Target) -> Predicate {
        let vocab = self.vocabulary(target);
        parse_predicate_in(self.conclusion, &vocab).expect("claim conclusion parses")
    }

    /// Instances of `catalog` the claim is stated for.
    pub fn targets(&self, catalog: &Catalog) -> Vec<Target> {
        let example = self.example.map(|e| parse_spec(e).expect("example spec parses").to_string());
        let ring_ok = |i: usize| {
            let e = &catalog.rings[i];
            self.max_order.is_none_or(|m| e.ring.order() <= m)
                && example.as_ref().is_none_or(|x| *x == e.spec.to_string())
        };
        let rings = |star_only: bool| {
            (0..catalog.rings.len())
                .filter(|&i| ring_ok(i) && (!star_only || catalog.rings[i].ring.has_star()))
                .map(Target::Ring)
                .collect::<Vec<_>>()
        };
        let modules = || (0..catalog.modules.len()).map(Target::Module).collect::<Vec<_>>();
        match self.scope {
            Scope::Rings => rings(false),
            Scope::StarRings => rings(true),
            Scope::Modules => modules(),
            Scope::RingsAndModules => {
                let mut v = rings(false);
                v.extend(modules());
                v
            }
            Scope::Pairs => (0..catalog.pairs.len()).map(Target::Pair).collect(),
        }
    }

    /// Verdict and witness text for one instance.
    pub fn evaluate(&self, wb: &Workbench<'_>, target: Target) -> (Verdict, Option<String>) {
        let source = match FlagSource::new(wb, target) {
            Ok(s) => s,
            Err(e) => return (Verdict::Skipped, Some(e)),
        };
        if let Some(h) = self.hypothesis_for(target) {
            match source.eval(&h) {
                Err(e) => return (Verdict::Skipped, Some(e)),
                Ok((false, why)) => return (Verdict::HypothesisNotMet, Some(why)),
                Ok((true, _)) => {}
            }
        }
        match source.eval(&self.conclusion_for(target)) {
            Err(e) => (Verdict::Skipped, Some(e)),
            Ok((true, _)) => (Verdict::Holds, None),
            Ok((false, why)) => (Verdict::Violated, Some(why)),
        }
    }
}

enum FlagSource<'w, 'c> {
    Ring { wb: &'w Workbench<'c>, index: usize, report: Arc<RingReport> },
    Module { analysis: Arc<ModuleAnalysis> },
    Pair { pair: &'c EmbeddingPair, sub: Arc<RingReport>, over: Arc<RingReport> },
}

fn describe(name: &str, flag: &Option<Flag>) -> String {
    match flag {
        None => format!("{name}=n/a"),
        Some(f) => match (&f.witness, f.holds) {
            (Some(w), false) => format!("{name}=no [{w}]"),
            (_, false) => format!("{name}=no"),
            (_, true) => format!("{name}=yes"),
        },
    }
}

fn bool_flag(ok: bool, w: impl FnOnce() -> Witness) -> Flag {
    if ok {
        Flag::yes()
    } else {
        Flag::no(w())
    }
}

impl<'w, 'c> FlagSource<'w, 'c> {
    fn new(wb: &'w Workbench<'c>, target: Target) -> Result<Self, String> {
        Ok(match target {
            Target::Ring(index) => FlagSource::Ring { wb, index, report: wb.ring(index)? },
            Target::Module(index) => FlagSource::Module { analysis: wb.module(index)? },
            Target::Pair(index) => {
                let pair = &wb.catalog.pairs[index];
                let get = |name: &str| wb.ring_named(name).ok_or_else(|| format!("unknown ring `{name}`"))?;
                FlagSource::Pair { pair, sub: get(&pair.sub)?, over: get(&pair.over)? }
            }
        })
    }

    fn flag(&self, name: &str) -> Result<Option<Flag>, String> {
        match self {
            FlagSource::Ring { wb, index, report } => match report.flag(name) {
                Some(f) => Ok(Some(f)),
                None => derived_ring_flag(wb, *index, report, name),
            },
            FlagSource::Module { analysis } => Ok(module_flag(analysis, name)),
            FlagSource::Pair { pair, sub, over } => {
                if let Some(rest) = name.strip_prefix("sub_") {
                    return Ok(sub.flag(rest));
                }
                if let Some(rest) = name.strip_prefix("over_") {
                    return Ok(over.flag(rest));
                }
                Ok(pair_flag(pair, sub, over, name))
            }
        }
    }

    /// Value of `p` plus a description of every flag it mentions.
    fn eval(&self, p: &Predicate) -> Result<(bool, String), String> {
        let mut values: HashMap<&str, Option<Flag>> = HashMap::new();
        let mut text = Vec::new();
        for name in p.flags() {
            let f = self.flag(name)?;
            text.push(describe(name, &f));
            values.insert(name, f);
        }
        let value = p.eval(&|n| values.get(n).and_then(|f| f.as_ref().map(|f| f.holds)));
        Ok((value, text.join(", ")))
    }
}

fn derived_ring_flag(wb: &Workbench<'_>, index: usize, report: &RingReport, name: &str) -> Result<Option<Flag>, String> {
    let facts = &report.facts;
    let r = &facts.ring;
    let el = &facts.elements;
    let flag = match name {
        "rickart_witness_valid" => Flag::for_all(r.elements(), |a| rickart_witness(facts, a).is_ok()),
        "idempotent_plus_mono" => Flag::for_all(r.elements(), |a| {
            facts.idempotents.iter().any(|&e| el.right_regular[r.sub(a, e)])
        }),
        "mono_complements_regular" => {
            let bad = r.elements().find_map(|a| {
                facts
                    .idempotents
                    .iter()
                    .find(|&&e| {
                        let u = r.sub(a, e);
                        el.right_regular[u] && !el.regular[u]
                    })
                    .map(|&e| (a, e))
            });
            bad.map_or_else(Flag::yes, |(a, e)| Flag::no(Witness::Pair(a, e)))
        }
        "regular_elements_are_units" => Flag::for_all(r.elements(), |a| el.regular[a] == el.unit[a]),
        "unit_regular_tests_agree" => Flag::for_all(r.elements(), |a| {
            let t = unit_regular_characterizations(facts, a);
            t[0] == t[1] && t[1] == t[2]
        }),
        "idempotents_are_projections" => match &el.projection {
            None => return Ok(None),
            Some(p) => Flag::for_all(facts.idempotents.iter().copied(), |e| p[e]),
        },
        "end_regular_iso" => match regular_endomorphism_iso(r, wb.budgets.max_assignments) {
            Ok(Some(_)) => Flag::yes(),
            Ok(None) => Flag::no(Witness::Note("a -> L_a is not an isomorphism onto End(R_R)".into())),
            Err(e) => return Err(e.to_string()),
        },
        "singular_homs_vanish" => singular_homs_vanish(wb, index, report)?,
        _ => return Ok(None),
    };
    Ok(Some(flag))
}

/// Hom(R/I, N) = 0 for essential right ideals I and nonsingular catalog modules N over R.
fn singular_homs_vanish(wb: &Workbench<'_>, index: usize, report: &RingReport) -> Result<Flag, String> {
    let name = &wb.catalog.rings[index].name;
    let mut targets = Vec::new();
    for (j, m) in wb.catalog.modules.iter().enumerate() {
        if &m.ring == name {
            let a = wb.module(j)?;
            if a.report.nonsingular.holds && a.facts.order() > 1 {
                targets.push((m.name.as_str(), a));
            }
        }
    }
    if targets.is_empty() {
        return Ok(Flag::yes_with(Witness::Note("no nonsingular module over this ring".into())));
    }
    let facts = &report.facts;
    let lattice = right_ideals(facts, wb.budgets.max_ideals).map_err(|e| e.to_string())?;
    let full = crate::set::ElemSet::full(facts.order());
    let cap = wb.budgets.max_assignments;
    for ideal in &lattice.ideals {
        let set = ideal.set();
        if set.len() == facts.order() || !is_essential(facts, set, &full).map_err(|e| e.to_string())? {
            continue;
        }
        let quotient = ModuleFacts::new(lattice.regular_module().module.quotient(set));
        for (tname, t) in &targets {
            let homs = HomSearch::new(&quotient, &t.facts, HomMode::All, cap).all().map_err(|e| e.to_string())?;
            let zero = t.facts.module.zero();
            if let Some(h) = homs.iter().find(|h| h.values.iter().any(|&v| v != zero)) {
                let ideal_text: Vec<String> = set.iter().map(|x| x.to_string()).collect();
                return Ok(Flag::no(Witness::Note(format!(
                    "R/{{{}}} -> {tname}: {}",
                    ideal_text.join(","),
                    Witness::Hom(h.values.clone())
                ))));
            }
        }
    }
    Ok(Flag::yes())
}

fn module_flag(a: &ModuleAnalysis, name: &str) -> Option<Flag> {
    let r = &a.report;
    if let Some((_, f)) = r.flags().into_iter().find(|(n, _)| *n == name) {
        return Some(f.clone());
    }
    let hom = |f: Elem| Witness::Hom(r.end.hom(f).values.clone());
    Some(match name {
        "essential_monos_are_isos" => match r.essential_monos_are_isos(&a.facts).witness {
            Some(Witness::Element(f)) => Flag::no(hom(f)),
            _ => Flag::yes(),
        },
        "idempotent_plus_mono" => match a.decompositions.iter().position(|d| d.is_err()) {
            Some(f) => Flag::no(hom(f)),
            None => Flag::yes(),
        },
        "idempotent_plus_essential_mono" => {
            let weak = a
                .decompositions
                .iter()
                .position(|d| d.as_ref().map_or(true, |d| d.kind < MonoKind::EssentialMono));
            match weak {
                Some(f) => Flag::no(hom(f)),
                None => Flag::yes(),
            }
        }
        "summands_match_idempotent_images" => bool_flag(r.summands_match_idempotent_images, || {
            Witness::Note("a summand is not the image of an idempotent endomorphism".into())
        }),
        _ => return None,
    })
}

fn pair_flag(pair: &EmbeddingPair, sub: &RingReport, over: &RingReport, name: &str) -> Option<Flag> {
    let (r, q) = (&sub.facts.ring, &over.facts.ring);
    let map = &pair.map;
    let image: std::collections::HashSet<Elem> = map.iter().copied().collect();
    Some(match name {
        "embedding" => {
            if map[r.zero()] != q.zero() || map[r.one()] != q.one() {
                Flag::no(Witness::Note("0 or 1 is not preserved".into()))
            } else if image.len() != map.len() {
                Flag::no(Witness::Note("map is not injective".into()))
            } else {
                let bad = r.elements().find_map(|a| {
                    r.elements()
                        .find(|&b| {
                            map[r.add(a, b)] != q.add(map[a], map[b]) || map[r.mul(a, b)] != q.mul(map[a], map[b])
                        })
                        .map(|b| (a, b))
                });
                bad.map_or_else(Flag::yes, |(a, b)| Flag::no(Witness::Pair(a, b)))
            }
        }
        "star_preserving" => {
            if !(r.has_star() && q.has_star()) {
                Flag::no(Witness::Note("both rings need an involution".into()))
            } else {
                Flag::for_all(r.elements(), |a| map[r.star(a).unwrap()] == q.star(map[a]).unwrap())
            }
        }
        "same_idempotents" => Flag::for_all(over.facts.idempotents.iter().copied(), |e| image.contains(&e)),
        "same_projections" => {
            if !q.has_star() {
                return None;
            }
            Flag::for_all(over.facts.projections.iter().copied(), |p| image.contains(&p))
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budgets;

    #[test]
    fn every_claim_parses_in_its_vocabulary() {
        for c in claims() {
            let targets: &[Target] = match c.scope {
                Scope::Rings | Scope::StarRings => &[Target::Ring(0)],
                Scope::Modules => &[Target::Module(0)],
                Scope::RingsAndModules => &[Target::Ring(0), Target::Module(0)],
                Scope::Pairs => &[Target::Pair(0)],
            };
            for &t in targets {
                let _ = c.hypothesis_for(t);
                let _ = c.conclusion_for(t);
            }
            assert!(!c.statement.is_empty());
        }
    }

    #[test]
    fn required_ids_exist_and_are_unique() {
        for id in [
            "T-CK", "T-3.1-fwd", "T-3.1-bwd", "P-4.1", "C-3.3", "C-3.4", "C-4.2", "C-4.3", "P-4.4", "T-2.5", "P-2.4",
            "T-2.6", "T-6.2", "T-6.3", "C-6.4", "INV-C2C3", "INV-FIN-REG",
        ] {
            assert!(claim(id).is_some(), "{id}");
        }
        let mut ids: Vec<&str> = claims().iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), claims().len());
    }

    #[test]
    fn selection_by_prefix() {
        let ids: Vec<&str> = select_claims("T-3.1").iter().map(|c| c.id).collect();
        assert_eq!(ids, vec!["T-3.1-fwd", "T-3.1-bwd"]);
        assert_eq!(select_claims("T-CK").len(), 1);
        assert!(select_claims("T-3").is_empty());
    }

    #[test]
    fn targets_follow_scope() {
        let c = Catalog::builtin(&Budgets::default()).unwrap();
        let star = claim("T-6.2").unwrap().targets(&c);
        assert!(star.iter().all(|t| matches!(t, Target::Ring(i) if c.rings[*i].ring.has_star())));
        assert_eq!(claim("EX-Z4").unwrap().targets(&c).len(), 1);
        assert_eq!(claim("EX-SWAP").unwrap().targets(&c).len(), 1);
        let small = claim("INV-END-REG").unwrap().targets(&c);
        assert!(!small.iter().any(|t| t.name(&c) == "R" || t.name(&c) == "M2F3"));
        assert_eq!(claim("EMB").unwrap().targets(&c).len(), c.pairs.len());
    }

    #[test]
    fn swap_ring_verdicts() {
        let c = Catalog::builtin(&Budgets::default()).unwrap();
        let wb = Workbench::new(&c, &Budgets::default());
        let i = c.ring_index("F2xF2_swap").unwrap();
        let (v, _) = claim("T-6.2").unwrap().evaluate(&wb, Target::Ring(i));
        assert_eq!(v, Verdict::Holds);
        let (v, _) = claim("EX-SWAP").unwrap().evaluate(&wb, Target::Ring(i));
        assert_eq!(v, Verdict::Holds);
        let (v, why) = claim("INV-STAR-PROJ").unwrap().evaluate(&wb, Target::Ring(i));
        assert_eq!(v, Verdict::HypothesisNotMet, "{why:?}");
    }

    #[test]
    fn violations_carry_witnesses() {
        // a false claim about Z/4 to exercise the violation path
        let bogus = Claim {
            id: "X",
            statement: "every ring is right nonsingular",
            scope: Scope::Rings,
            hypothesis: None,
            conclusion: "right_nonsingular",
            max_order: None,
            example: Some("zmod(4)"),
        };
        let c = Catalog::builtin(&Budgets::default()).unwrap();
        let wb = Workbench::new(&c, &Budgets::default());
        let t = bogus.targets(&c);
        let (v, w) = bogus.evaluate(&wb, t[0]);
        assert_eq!(v, Verdict::Violated);
        assert_eq!(w.unwrap(), "right_nonsingular=no [a=2]");
    }
}
