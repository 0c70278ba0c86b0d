//! Clean-family decompositions `a = e + u` and the ring-level predicates built on them.
//!
//! A decomposition is identified by its idempotent `e`; `u` is always `a - e`.
//! The `*` kinds ask `e` to be a projection and put no condition on `u`.

use serde::Serialize;
use thiserror::Error;

use crate::elements::RingFacts;
use crate::report::{Flag, Witness};
use crate::ring::Elem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Clean,
    AlmostClean,
    SpecialClean,
    SpecialAlmostClean,
}

impl BaseKind {
    pub const ALL: [BaseKind; 4] =
        [BaseKind::Clean, BaseKind::AlmostClean, BaseKind::SpecialClean, BaseKind::SpecialAlmostClean];

    pub fn is_special(self) -> bool {
        matches!(self, BaseKind::SpecialClean | BaseKind::SpecialAlmostClean)
    }

    /// Complement must be a unit (otherwise only regular).
    pub fn needs_unit(self) -> bool {
        matches!(self, BaseKind::Clean | BaseKind::SpecialClean)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DecompKind {
    pub base: BaseKind,
    /// Require `e` to be a projection.
    pub star: bool,
}

impl DecompKind {
    pub const fn plain(base: BaseKind) -> Self {
        DecompKind { base, star: false }
    }

    pub const fn star(base: BaseKind) -> Self {
        DecompKind { base, star: true }
    }

    pub fn name(&self) -> String {
        let base = match self.base {
            BaseKind::Clean => "clean",
            BaseKind::AlmostClean => "almost_clean",
            BaseKind::SpecialClean => "special_clean",
            BaseKind::SpecialAlmostClean => "special_almost_clean",
        };
        if self.star {
            base.replace("clean", "star_clean")
        } else {
            base.to_string()
        }
    }

    pub fn parse(name: &str) -> Option<DecompKind> {
        let star = name.contains("star_");
        let base = match name.replace("star_", "").as_str() {
            "clean" => BaseKind::Clean,
            "almost_clean" => BaseKind::AlmostClean,
            "special_clean" => BaseKind::SpecialClean,
            "special_almost_clean" => BaseKind::SpecialAlmostClean,
            _ => return None,
        };
        Some(DecompKind { base, star })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub element: Elem,
    pub idempotent: Elem,
    pub complement: Elem,
    pub u_is_unit: bool,
    pub u_is_regular: bool,
    /// `aR ∩ eR = 0`.
    pub special: bool,
    pub e_is_projection: bool,
}

impl Decomposition {
    pub fn of(facts: &RingFacts, a: Elem, e: Elem) -> Decomposition {
        let u = facts.ring.sub(a, e);
        Decomposition {
            element: a,
            idempotent: e,
            complement: u,
            u_is_unit: facts.elements.unit[u],
            u_is_regular: facts.elements.regular[u],
            special: facts.principal_meet_is_zero(a, e),
            e_is_projection: facts.elements.projection.as_ref().is_some_and(|p| p[e]),
        }
    }

    pub fn satisfies(&self, kind: DecompKind) -> bool {
        let u_ok = if kind.base.needs_unit() { self.u_is_unit } else { self.u_is_regular };
        u_ok && (!kind.base.is_special() || self.special) && (!kind.star || self.e_is_projection)
    }
}

/// All decompositions of `a` of the requested kind, by ascending idempotent index.
pub fn decompositions(facts: &RingFacts, a: Elem, kind: DecompKind) -> Vec<Decomposition> {
    let candidates = if kind.star { &facts.projections } else { &facts.idempotents };
    candidates
        .iter()
        .map(|&e| Decomposition::of(facts, a, e))
        .filter(|d| d.satisfies(kind))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CleannessReport {
    pub clean: Flag,
    pub almost_clean: Flag,
    pub special_clean: Flag,
    pub special_almost_clean: Flag,
    pub uniquely_special_clean: Flag,
    pub uniquely_special_almost_clean: Flag,
    pub star_clean: Option<Flag>,
    pub almost_star_clean: Option<Flag>,
    pub special_star_clean: Option<Flag>,
    pub special_almost_star_clean: Option<Flag>,
    pub uniquely_special_star_clean: Option<Flag>,
    pub uniquely_special_almost_star_clean: Option<Flag>,
}

fn existence_flag(facts: &RingFacts, kind: DecompKind) -> Flag {
    Flag::for_all(facts.ring.elements(), |a| !decompositions(facts, a, kind).is_empty())
}

/// Exactly one decomposition of `kind` for every element.
fn uniqueness_flag(facts: &RingFacts, kind: DecompKind) -> Flag {
    Flag::for_all(facts.ring.elements(), |a| decompositions(facts, a, kind).len() == 1)
}

pub fn classify_cleanness(facts: &RingFacts) -> CleannessReport {
    use BaseKind::*;
    let plain = |b| existence_flag(facts, DecompKind::plain(b));
    let star = |b| facts.ring.has_star().then(|| existence_flag(facts, DecompKind::star(b)));
    let star_unique =
        |b| facts.ring.has_star().then(|| uniqueness_flag(facts, DecompKind::star(b)));
    CleannessReport {
        clean: plain(Clean),
        almost_clean: plain(AlmostClean),
        special_clean: plain(SpecialClean),
        special_almost_clean: plain(SpecialAlmostClean),
        uniquely_special_clean: uniqueness_flag(facts, DecompKind::plain(SpecialClean)),
        uniquely_special_almost_clean: uniqueness_flag(facts, DecompKind::plain(SpecialAlmostClean)),
        star_clean: star(Clean),
        almost_star_clean: star(AlmostClean),
        special_star_clean: star(SpecialClean),
        special_almost_star_clean: star(SpecialAlmostClean),
        uniquely_special_star_clean: star_unique(SpecialClean),
        uniquely_special_almost_star_clean: star_unique(SpecialAlmostClean),
    }
}

pub const CLEANNESS_FLAGS: [&str; 12] = [
    "clean",
    "almost_clean",
    "special_clean",
    "special_almost_clean",
    "uniquely_special_clean",
    "uniquely_special_almost_clean",
    "star_clean",
    "almost_star_clean",
    "special_star_clean",
    "special_almost_star_clean",
    "uniquely_special_star_clean",
    "uniquely_special_almost_star_clean",
];

impl CleannessReport {
    /// `(name, flag)` pairs in a fixed order, omitting absent star flags.
    pub fn flags(&self) -> Vec<(&'static str, &Flag)> {
        let mut out = vec![
            ("clean", &self.clean),
            ("almost_clean", &self.almost_clean),
            ("special_clean", &self.special_clean),
            ("special_almost_clean", &self.special_almost_clean),
            ("uniquely_special_clean", &self.uniquely_special_clean),
            ("uniquely_special_almost_clean", &self.uniquely_special_almost_clean),
        ];
        let star = [
            ("star_clean", &self.star_clean),
            ("almost_star_clean", &self.almost_star_clean),
            ("special_star_clean", &self.special_star_clean),
            ("special_almost_star_clean", &self.special_almost_star_clean),
            ("uniquely_special_star_clean", &self.uniquely_special_star_clean),
            ("uniquely_special_almost_star_clean", &self.uniquely_special_almost_star_clean),
        ];
        out.extend(star.into_iter().filter_map(|(n, f)| f.as_ref().map(|f| (n, f))));
        out
    }

    pub fn witness_for(&self, name: &str) -> Option<&Witness> {
        self.flags().into_iter().find(|(n, _)| *n == name).and_then(|(_, f)| f.witness.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("ring is not abelian: idempotent {0} does not commute with {1}")]
    NotAbelian(Elem, Elem),
    #[error("no idempotent generates the right annihilator of {0}")]
    NotRickartAt(Elem),
    #[error("extracted decomposition of {0} is not special almost clean")]
    WitnessInvalid(Elem),
}

/// For abelian rings: take the idempotent `e` with `ann_r(a) = eR` and return
/// `a = e + (a - e)`, checked to be special almost clean.
pub fn rickart_witness(facts: &RingFacts, a: Elem) -> Result<Decomposition, DecompError> {
    if let Err((e, x)) = facts.abelian {
        return Err(DecompError::NotAbelian(e, x));
    }
    let e = facts
        .idempotents
        .iter()
        .copied()
        .find(|&e| facts.right_principal[e] == facts.right_ann[a])
        .ok_or(DecompError::NotRickartAt(a))?;
    let d = Decomposition::of(facts, a, e);
    if !(d.u_is_regular && d.special) {
        return Err(DecompError::WitnessInvalid(a));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct, Environment};
    use crate::dsl::parse_spec;

    fn facts(text: &str) -> RingFacts {
        RingFacts::new(construct(&parse_spec(text).unwrap(), &Environment::default(), 4096).unwrap())
    }

    fn pairs(ds: &[Decomposition]) -> Vec<(Elem, Elem)> {
        ds.iter().map(|d| (d.idempotent, d.complement)).collect()
    }

    #[test]
    fn z4_element_two() {
        let f = facts("zmod(4)");
        assert_eq!(pairs(&decompositions(&f, 2, DecompKind::plain(BaseKind::Clean))), vec![(1, 1)]);
        assert!(decompositions(&f, 2, DecompKind::plain(BaseKind::SpecialAlmostClean)).is_empty());
    }

    #[test]
    fn zero_has_special_clean_decomposition_with_one() {
        for text in ["zmod(4)", "matrix(gf(2), 2)", "uppertri(gf(3), 2)"] {
            let f = facts(text);
            let one = f.ring.one();
            let ds = decompositions(&f, f.ring.zero(), DecompKind::plain(BaseKind::SpecialClean));
            assert!(pairs(&ds).contains(&(one, f.ring.neg(one))), "{text}");
        }
    }

    #[test]
    fn z6_three_special_almost_clean() {
        let f = facts("zmod(6)");
        let ds = decompositions(&f, 3, DecompKind::plain(BaseKind::SpecialAlmostClean));
        assert!(pairs(&ds).contains(&(4, 5)));
    }

    #[test]
    fn ring_level_examples() {
        let z4 = classify_cleanness(&facts("zmod(4)"));
        assert!(z4.clean.holds);
        assert!(!z4.special_almost_clean.holds);
        assert_eq!(z4.special_almost_clean.witness, Some(Witness::Element(2)));
        assert!(z4.star_clean.is_none());

        assert!(classify_cleanness(&facts("zmod(6)")).uniquely_special_clean.holds);
        assert!(classify_cleanness(&facts("matrix(gf(2), 2)")).special_clean.holds);

        let swap = classify_cleanness(&facts("ring P = product(gf(2), gf(2)) with involution swap"));
        let flag = swap.special_almost_star_clean.unwrap();
        assert!(!flag.holds);
        // least witness is (0,1) = index 1; its swap (1,0) = index 2 fails too
        assert_eq!(flag.witness, Some(Witness::Element(1)));
        let f = facts("ring P = product(gf(2), gf(2)) with involution swap");
        assert!(decompositions(&f, 2, DecompKind::star(BaseKind::SpecialAlmostClean)).is_empty());
        assert!(!decompositions(&f, 2, DecompKind::plain(BaseKind::SpecialAlmostClean)).is_empty());
    }

    #[test]
    fn rickart_witnesses() {
        let f = facts("zmod(6)");
        let d = rickart_witness(&f, 3).unwrap();
        assert_eq!((d.idempotent, d.complement), (4, 5));
        for text in ["zmod(6)", "gf(5)", "product(gf(2), gf(3))"] {
            let f = facts(text);
            for &u in &f.units {
                let d = rickart_witness(&f, u).unwrap();
                assert_eq!((d.idempotent, d.complement), (f.ring.zero(), u));
            }
            let d = rickart_witness(&f, f.ring.zero()).unwrap();
            assert_eq!((d.idempotent, d.complement), (f.ring.one(), f.ring.neg(f.ring.one())));
        }
        assert_eq!(rickart_witness(&facts("zmod(4)"), 2), Err(DecompError::NotRickartAt(2)));
        assert!(matches!(
            rickart_witness(&facts("matrix(gf(2), 2)"), 0),
            Err(DecompError::NotAbelian(..))
        ));
    }

    #[test]
    fn kind_names_round_trip() {
        for base in BaseKind::ALL {
            for kind in [DecompKind::plain(base), DecompKind::star(base)] {
                assert_eq!(DecompKind::parse(&kind.name()), Some(kind));
            }
        }
        assert_eq!(DecompKind::plain(BaseKind::AlmostClean).name(), "almost_clean");
        assert_eq!(DecompKind::star(BaseKind::AlmostClean).name(), "almost_star_clean");
    }
}
