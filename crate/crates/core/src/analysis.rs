//! One-stop classification of a ring: element counts, clean-family flags,
//! ring classes and a fingerprint, with flag lookup by name.

use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budgets;
use crate::decomp::{classify_cleanness, CleannessReport};
use crate::elements::RingFacts;
use crate::fingerprint::Fingerprint;
use crate::lattice::{ring_class, ClassError, RingClassReport};
use crate::report::{Flag, Witness};
use crate::ring::FinRing;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementSummary {
    pub order: usize,
    pub idempotents: Vec<usize>,
    pub units: usize,
    pub regular: usize,
    pub central: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projections: Option<Vec<usize>>,
    pub commutative: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RingReport {
    pub label: String,
    pub fingerprint: Fingerprint,
    pub elements: ElementSummary,
    pub cleanness: CleannessReport,
    pub class: RingClassReport,
    #[serde(skip)]
    pub facts: RingFacts,
}

/// Names accepted by [`RingReport::flag`] besides the report field names.
pub const FLAG_ALIASES: &[(&str, &str)] = &[
    ("C1", "CS"),
    ("cs", "CS"),
    ("nonsingular", "right_nonsingular"),
    ("morphic", "morphic_right"),
    ("regular", "vn_regular"),
];

impl RingReport {
    pub fn new(ring: impl Into<Arc<FinRing>>, budgets: &Budgets) -> Result<RingReport, ClassError> {
        let facts = RingFacts::new(ring);
        Self::from_facts(facts, budgets)
    }

    pub fn from_facts(facts: RingFacts, budgets: &Budgets) -> Result<RingReport, ClassError> {
        let class = ring_class(&facts, budgets)?;
        let cleanness = classify_cleanness(&facts);
        let r = &facts.ring;
        let e = &facts.elements;
        let elements = ElementSummary {
            order: r.order(),
            idempotents: facts.idempotents.clone(),
            units: facts.units.len(),
            regular: e.regular.iter().filter(|&&x| x).count(),
            central: e.central.iter().filter(|&&x| x).count(),
            projections: e.projection.as_ref().map(|_| facts.projections.clone()),
            commutative: r.is_commutative(),
        };
        Ok(RingReport {
            label: r.label().to_string(),
            fingerprint: Fingerprint::of(&facts),
            elements,
            cleanness,
            class,
            facts,
        })
    }

    /// Every named flag, ring classes first.
    pub fn flags(&self) -> Vec<(&'static str, &Flag)> {
        let mut v = self.class.flags();
        v.extend(self.cleanness.flags());
        v
    }

    /// Look up a flag by name or alias. `rickart` is right and left Rickart.
    pub fn flag(&self, name: &str) -> Option<Flag> {
        if name == "rickart" {
            return Some(self.class.rickart_right.and(&self.class.rickart_left));
        }
        if name == "commutative" {
            let pair = self.facts.ring.noncommuting_pair();
            return Some(pair.map_or_else(Flag::yes, |(a, b)| Flag::no(Witness::Pair(a, b))));
        }
        let name = FLAG_ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, t)| t);
        self.flags().into_iter().find(|(n, _)| *n == name).map(|(_, f)| f.clone())
    }

    /// Flag names whose value depends on an involution.
    pub fn is_star_flag(name: &str) -> bool {
        name.contains("star") || name == "proper_involution"
    }

    /// All names [`RingReport::flag`] can resolve on some ring.
    pub fn known_flags() -> Vec<&'static str> {
        let mut v = vec![
            "abelian",
            "vn_regular",
            "unit_regular",
            "rickart_right",
            "rickart_left",
            "rickart",
            "right_nonsingular",
            "left_nonsingular",
            "CS",
            "C2",
            "C3",
            "quasi_continuous",
            "continuous",
            "morphic_right",
            "morphic_left",
            "reduced",
            "commutative",
            "star_regular",
            "rickart_star",
            "proper_involution",
        ];
        v.extend(crate::decomp::CLEANNESS_FLAGS);
        v.extend(FLAG_ALIASES.iter().map(|(a, _)| *a));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct, Environment};
    use crate::dsl::parse_spec;

    fn report(text: &str) -> RingReport {
        let r = construct(&parse_spec(text).unwrap(), &Environment::default(), 4096).unwrap();
        RingReport::new(r, &Budgets::default()).unwrap()
    }

    #[test]
    fn flag_lookup_and_aliases() {
        let r = report("zmod(4)");
        assert!(r.flag("clean").unwrap().holds);
        assert!(!r.flag("rickart").unwrap().holds);
        assert!(!r.flag("nonsingular").unwrap().holds);
        assert!(r.flag("CS").unwrap().holds);
        assert_eq!(r.flag("C1"), r.flag("CS"));
        assert!(r.flag("star_clean").is_none());
        assert!(r.flag("frobnicate").is_none());
        for name in RingReport::known_flags() {
            if !RingReport::is_star_flag(name) {
                assert!(r.flag(name).is_some(), "{name}");
            }
        }
        let s = report("ring A = zmod(6) with involution identity");
        for name in RingReport::known_flags() {
            assert!(s.flag(name).is_some(), "{name}");
        }
    }

    #[test]
    fn field_has_all_positive_flags() {
        let r = report("gf(5)");
        for (name, f) in r.flags() {
            assert!(f.holds, "{name}");
        }
    }
}
