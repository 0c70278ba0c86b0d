//! Right ideals, essentiality, summands, (C1)-(C3) for `R_R`, the singular
//! ideal, and ring-level classes (vn-regular, unit-regular, Rickart, morphic,
//! *-regular, Rickart *-ring).

use std::collections::HashMap;

use serde::Serialize;

use crate::budget::Budgets;
use crate::elements::RingFacts;
use crate::modlab::{cs_conditions_in, is_isomorphic, submodules, CsFlags, FinModule, ModuleError, ModuleFacts, SubmoduleLattice};
use crate::report::{Flag, Witness};
use crate::ring::Elem;
use crate::set::ElemSet;

/// A right ideal as a set of ring elements. `generating_idempotents` is filled
/// in by [`summands`] and [`right_ideals`]: the idempotents `e` with `eR` equal
/// to this ideal (empty means not a summand).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RightIdeal {
    set: ElemSet,
    generating_idempotents: Option<Vec<Elem>>,
}

impl RightIdeal {
    pub fn from_set(set: ElemSet) -> Self {
        RightIdeal { set, generating_idempotents: None }
    }

    fn annotated(set: ElemSet, facts: &RingFacts) -> Self {
        let gens = facts.idempotents.iter().copied().filter(|&e| facts.right_principal[e] == set).collect();
        RightIdeal { set, generating_idempotents: Some(gens) }
    }

    pub fn set(&self) -> &ElemSet {
        &self.set
    }

    pub fn into_set(self) -> ElemSet {
        self.set
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.set.to_vec()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.set.contains(x)
    }

    pub fn generating_idempotents(&self) -> Option<&[Elem]> {
        self.generating_idempotents.as_deref()
    }

    /// `None` when the ideal was not annotated.
    pub fn is_summand(&self) -> Option<bool> {
        self.generating_idempotents.as_ref().map(|g| !g.is_empty())
    }
}

/// Every right ideal of `R`, sorted by (size, member list).
#[derive(Debug, Clone)]
pub struct IdealLattice {
    pub ideals: Vec<RightIdeal>,
    pub complete: bool,
    lattice: SubmoduleLattice,
    regular: ModuleFacts,
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn position(&self, set: &ElemSet) -> Option<usize> {
        self.lattice.position(set)
    }

    pub fn summand_flags(&self) -> Vec<bool> {
        self.ideals.iter().map(|i| i.is_summand() == Some(true)).collect()
    }

    /// `R_R` with its cyclic submodules and annihilators.
    pub fn regular_module(&self) -> &ModuleFacts {
        &self.regular
    }
}

pub fn right_ideals(facts: &RingFacts, max_ideals: usize) -> Result<IdealLattice, ModuleError> {
    let regular = ModuleFacts::new(FinModule::regular(&facts.ring));
    let lattice = submodules(&regular, max_ideals)?;
    let ideals = lattice.members.iter().map(|s| RightIdeal::annotated(s.clone(), facts)).collect();
    Ok(IdealLattice { ideals, complete: lattice.complete, lattice, regular })
}

/// `small` essential in `big`, both right ideals.
pub fn is_essential(facts: &RingFacts, small: &ElemSet, big: &ElemSet) -> Result<bool, ModuleError> {
    if !small.is_subset(big) {
        return Err(ModuleError::NotContained);
    }
    Ok(essential(facts, small, big))
}

fn essential(facts: &RingFacts, small: &ElemSet, big: &ElemSet) -> bool {
    big.iter()
        .filter(|&x| !small.contains(x))
        .all(|x| facts.right_principal[x].intersection_len(small) > 1)
}

/// `{eR : e idempotent}`, each annotated with its generating idempotents.
pub fn summands(facts: &RingFacts) -> Vec<RightIdeal> {
    let mut sets: Vec<ElemSet> = facts.idempotents.iter().map(|&e| facts.right_principal[e].clone()).collect();
    sets.sort();
    sets.dedup();
    sets.into_iter().map(|s| RightIdeal::annotated(s, facts)).collect()
}

pub fn cs_conditions(lattice: &IdealLattice, cap: u64) -> Result<CsFlags, ModuleError> {
    cs_conditions_in(&lattice.regular, &lattice.lattice, &lattice.summand_flags(), cap)
}

/// `Z(R_R) = {x : ann_r(x) essential in R}`.
pub fn singular_ideal(facts: &RingFacts) -> (RightIdeal, Flag) {
    let full = ElemSet::full(facts.order());
    let z = ElemSet::from_elems(
        facts.order(),
        facts.ring.elements().filter(|&x| essential(facts, &facts.right_ann[x], &full)),
    );
    let flag = match z.iter().find(|&x| x != facts.ring.zero()) {
        Some(x) => Flag::no(Witness::Element(x)),
        None => Flag::yes(),
    };
    (RightIdeal::from_set(z), flag)
}

/// The three unit-regularity tests at `a`: `a = aua`, `a = ev`, `a = v'e'`
/// (`u`, `v`, `v'` units, `e`, `e'` idempotents).
pub fn unit_regular_characterizations(facts: &RingFacts, a: Elem) -> [bool; 3] {
    let r = &facts.ring;
    let inner = facts.units.iter().any(|&u| r.mul(r.mul(a, u), a) == a);
    let left = facts.idempotents.iter().any(|&e| facts.units.iter().any(|&v| r.mul(e, v) == a));
    let right = facts.idempotents.iter().any(|&e| facts.units.iter().any(|&v| r.mul(v, e) == a));
    [inner, left, right]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingClassReport {
    pub order: usize,
    pub ideals: usize,
    pub summands: usize,
    pub singular_ideal: Vec<Elem>,
    pub abelian: Flag,
    pub vn_regular: Flag,
    pub unit_regular: Flag,
    pub rickart_right: Flag,
    pub rickart_left: Flag,
    pub right_nonsingular: Flag,
    pub left_nonsingular: Flag,
    pub cs: Flag,
    pub c2: Flag,
    pub c3: Flag,
    pub quasi_continuous: Flag,
    pub continuous: Flag,
    pub morphic_right: Flag,
    pub morphic_left: Flag,
    pub reduced: Flag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_regular: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rickart_star: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper_involution: Option<Flag>,
}

impl RingClassReport {
    pub fn flags(&self) -> Vec<(&'static str, &Flag)> {
        let mut v = vec![
            ("abelian", &self.abelian),
            ("vn_regular", &self.vn_regular),
            ("unit_regular", &self.unit_regular),
            ("rickart_right", &self.rickart_right),
            ("rickart_left", &self.rickart_left),
            ("right_nonsingular", &self.right_nonsingular),
            ("left_nonsingular", &self.left_nonsingular),
            ("CS", &self.cs),
            ("C2", &self.c2),
            ("C3", &self.c3),
            ("quasi_continuous", &self.quasi_continuous),
            ("continuous", &self.continuous),
            ("morphic_right", &self.morphic_right),
            ("morphic_left", &self.morphic_left),
            ("reduced", &self.reduced),
        ];
        for (name, f) in [
            ("star_regular", &self.star_regular),
            ("rickart_star", &self.rickart_star),
            ("proper_involution", &self.proper_involution),
        ] {
            if let Some(f) = f {
                v.push((name, f));
            }
        }
        v
    }
}

/// Internal inconsistency between characterizations that must agree.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unit-regularity characterizations disagree at element {element}: {tests:?}")]
pub struct CharacterizationMismatch {
    pub element: Elem,
    pub tests: [bool; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Mismatch(#[from] CharacterizationMismatch),
}

fn unit_regular_flag(facts: &RingFacts) -> Result<Flag, CharacterizationMismatch> {
    let mut first_failure = None;
    for a in facts.ring.elements() {
        let tests = unit_regular_characterizations(facts, a);
        if tests.iter().any(|&t| t != tests[0]) {
            return Err(CharacterizationMismatch { element: a, tests });
        }
        if !tests[0] && first_failure.is_none() {
            first_failure = Some(a);
        }
    }
    Ok(first_failure.map_or_else(Flag::yes, |a| Flag::no(Witness::Element(a))))
}

/// Right Rickart: every `ann_r(a)` is `eR` for some `e` among `gens`.
fn annihilators_generated_by(facts: &RingFacts, gens: &[Elem]) -> Flag {
    Flag::for_all(facts.ring.elements(), |a| {
        gens.iter().any(|&e| facts.right_principal[e] == facts.right_ann[a])
    })
}

/// Right morphic: `ann_r(x) ≅ R/xR` for every `x`.
fn morphic(facts: &RingFacts, regular: &ModuleFacts, cap: u64) -> Result<Flag, ModuleError> {
    let mut cache: HashMap<(ElemSet, ElemSet), bool> = HashMap::new();
    for x in facts.ring.elements() {
        let key = (facts.right_ann[x].clone(), facts.right_principal[x].clone());
        let iso = match cache.get(&key) {
            Some(&b) => b,
            None => {
                let ann = ModuleFacts::new(regular.module.submodule(&key.0).0);
                let quotient = ModuleFacts::new(regular.module.quotient(&key.1));
                let b = is_isomorphic(&ann, &quotient, cap)?.is_some();
                cache.insert(key, b);
                b
            }
        };
        if !iso {
            return Ok(Flag::no(Witness::Element(x)));
        }
    }
    Ok(Flag::yes())
}

pub fn ring_class(facts: &RingFacts, budgets: &Budgets) -> Result<RingClassReport, ClassError> {
    let r = &facts.ring;
    let opposite = RingFacts::new(r.opposite());

    let lattice = right_ideals(facts, budgets.max_ideals)?;
    let cs = cs_conditions(&lattice, budgets.max_assignments)?;
    let (z, right_nonsingular) = singular_ideal(facts);
    let (_, left_nonsingular) = singular_ideal(&opposite);

    let vn_regular = Flag::for_all(r.elements(), |a| r.elements().any(|x| r.mul(r.mul(a, x), a) == a));
    let unit_regular = unit_regular_flag(facts)?;
    let rickart_right = annihilators_generated_by(facts, &facts.idempotents);
    let rickart_left = annihilators_generated_by(&opposite, &opposite.idempotents);

    let morphic_right = morphic(facts, lattice.regular_module(), budgets.max_assignments)?;
    let opposite_regular = ModuleFacts::new(FinModule::regular(&opposite.ring));
    let morphic_left = morphic(&opposite, &opposite_regular, budgets.max_assignments)?;

    let reduced = Flag::for_all(r.elements(), |a| a == r.zero() || r.mul(a, a) != r.zero());
    let abelian = match facts.abelian {
        Ok(()) => Flag::yes(),
        Err((e, x)) => Flag::no(Witness::Pair(e, x)),
    };

    let (proper_involution, star_regular, rickart_star) = match r.star_table() {
        Some(_) => {
            let proper = Flag::for_all(r.elements(), |a| {
                a == r.zero() || r.mul(r.star(a).unwrap(), a) != r.zero()
            });
            let star_regular = vn_regular.and(&proper);
            let rickart_star = annihilators_generated_by(facts, &facts.projections);
            (Some(proper), Some(star_regular), Some(rickart_star))
        }
        None => (None, None, None),
    };

    Ok(RingClassReport {
        order: r.order(),
        ideals: lattice.len(),
        summands: summands(facts).len(),
        singular_ideal: z.to_vec(),
        abelian,
        vn_regular,
        unit_regular,
        rickart_right,
        rickart_left,
        right_nonsingular,
        left_nonsingular,
        quasi_continuous: cs.quasi_continuous(),
        continuous: cs.continuous(),
        cs: cs.c1,
        c2: cs.c2,
        c3: cs.c3,
        morphic_right,
        morphic_left,
        reduced,
        star_regular,
        rickart_star,
        proper_involution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct, Environment};
    use crate::dsl::parse_spec;

    fn facts(text: &str) -> RingFacts {
        RingFacts::new(construct(&parse_spec(text).unwrap(), &Environment::default(), 4096).unwrap())
    }

    fn sets(l: &IdealLattice) -> Vec<Vec<Elem>> {
        l.ideals.iter().map(|i| i.to_vec()).collect()
    }

    #[test]
    fn small_lattices() {
        let z4 = facts("zmod(4)");
        assert_eq!(sets(&right_ideals(&z4, 100).unwrap()), vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        let z6 = facts("zmod(6)");
        let l = right_ideals(&z6, 100).unwrap();
        assert_eq!(sets(&l), vec![vec![0], vec![0, 3], vec![0, 2, 4], (0..6).collect()]);
        assert!(l.ideals.iter().all(|i| i.is_summand() == Some(true)));
        assert_eq!(right_ideals(&facts("gf(2)"), 100).unwrap().len(), 2);
    }

    #[test]
    fn ideal_budget() {
        assert!(matches!(
            right_ideals(&facts("zmod(6)"), 3),
            Err(ModuleError::Budget(_))
        ));
    }

    #[test]
    fn essential_ideals() {
        let z4 = facts("zmod(4)");
        let two = ElemSet::from_elems(4, [0, 2]);
        let all = ElemSet::full(4);
        assert!(is_essential(&z4, &two, &all).unwrap());
        assert!(!is_essential(&z4, &ElemSet::singleton(4, 0), &all).unwrap());
        assert!(is_essential(&z4, &two, &two).unwrap());
        assert_eq!(is_essential(&z4, &all, &two), Err(ModuleError::NotContained));
    }

    #[test]
    fn summand_lists() {
        let z4 = facts("zmod(4)");
        let s: Vec<_> = summands(&z4).iter().map(|i| i.to_vec()).collect();
        assert_eq!(s, vec![vec![0], vec![0, 1, 2, 3]]);
        assert_eq!(summands(&facts("zmod(6)")).len(), 4);
        let t = facts("uppertri(gf(2), 2)");
        // E11 = (a=1,b=0,d=0) = 4, E22 = 1
        let s = summands(&t);
        for e in [4, 1] {
            assert!(s.iter().any(|i| i.set() == &t.right_principal[e]));
        }
    }

    #[test]
    fn singular_ideals() {
        let (z, f) = singular_ideal(&facts("zmod(4)"));
        assert_eq!(z.to_vec(), vec![0, 2]);
        assert!(!f.holds);
        let (z, f) = singular_ideal(&facts("zmod(6)"));
        assert_eq!(z.to_vec(), vec![0]);
        assert!(f.holds);
        assert!(singular_ideal(&facts("gf(4)")).1.holds);
    }

    #[test]
    fn z4_class() {
        let r = ring_class(&facts("zmod(4)"), &Budgets::default()).unwrap();
        assert_eq!(r.vn_regular, Flag::no(Witness::Element(2)));
        assert_eq!(r.rickart_right, Flag::no(Witness::Element(2)));
        assert!(r.morphic_right.holds);
        assert!(r.quasi_continuous.holds);
        assert!(!r.right_nonsingular.holds);
    }

    #[test]
    fn z6_class() {
        let r = ring_class(&facts("zmod(6)"), &Budgets::default()).unwrap();
        assert!(r.vn_regular.holds && r.unit_regular.holds && r.rickart_right.holds && r.rickart_left.holds);
        assert!(r.continuous.holds);
    }

    #[test]
    fn uppertri_class() {
        let r = ring_class(&facts("uppertri(gf(2), 2)"), &Budgets::default()).unwrap();
        assert!(r.cs.holds);
        assert!(r.right_nonsingular.holds);
        assert!(!r.quasi_continuous.holds);
        assert!(!r.c2.holds);
    }

    #[test]
    fn transpose_star_regular() {
        // A^T A = 0 forces A = 0 over GF(3): sums of two squares vanish only at 0
        let squares_vanish_only_at_zero = (0..3).all(|x: i32| (0..3).all(|y: i32| (x * x + y * y) % 3 != 0 || (x == 0 && y == 0)));
        assert!(squares_vanish_only_at_zero);
        let r = ring_class(&facts("ring Q = matrix(gf(3), 2) with involution transpose"), &Budgets::default()).unwrap();
        assert!(r.star_regular.unwrap().holds);
        assert!(r.rickart_star.unwrap().holds);
    }

    #[test]
    fn unit_regular_characterizations_agree_on_z4() {
        let z4 = facts("zmod(4)");
        for a in 0..4 {
            let t = unit_regular_characterizations(&z4, a);
            assert!(t.iter().all(|&x| x == t[0]));
        }
        assert_eq!(unit_regular_characterizations(&z4, 2), [false; 3]);
    }
}
