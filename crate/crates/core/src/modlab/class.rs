//! Lattice conditions (C1)-(C3), the singular submodule, and module-level classification.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::budget::Budgets;
use crate::decomp::{classify_cleanness, CleannessReport};
use crate::elements::RingFacts;
use crate::report::{Flag, Witness};
use crate::ring::{Elem, FinRing};
use crate::set::ElemSet;

use super::endo::{endo_decompose, endomorphism_ring, EndRing, EndoDecomposition, MonoKind};
use super::engine::{is_isomorphic, submodules, ModuleFacts, SubmoduleLattice};
use super::{FinModule, ModuleError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CsFlags {
    pub c1: Flag,
    pub c2: Flag,
    pub c3: Flag,
}

impl CsFlags {
    pub fn quasi_continuous(&self) -> Flag {
        self.c1.and(&self.c3)
    }

    pub fn continuous(&self) -> Flag {
        self.c1.and(&self.c2)
    }
}

/// (C1): every member is essential in a summand. Returns the first failing member.
pub(crate) fn c1_condition(mf: &ModuleFacts, lattice: &SubmoduleLattice, summand: &[bool]) -> Flag {
    let summands: Vec<&ElemSet> =
        lattice.members.iter().zip(summand).filter(|(_, &s)| s).map(|(m, _)| m).collect();
    for (n, &is_summand) in lattice.members.iter().zip(summand) {
        if is_summand {
            continue;
        }
        let ok = summands.iter().any(|s| n.is_subset(s) && mf.essential_unchecked(n, s));
        if !ok {
            return Flag::no(Witness::Ideal(n.to_vec()));
        }
    }
    Flag::yes()
}

/// Evaluate (C1), (C2), (C3) over a complete lattice with known summands.
pub(crate) fn cs_conditions_in(
    mf: &ModuleFacts,
    lattice: &SubmoduleLattice,
    summand: &[bool],
    cap: u64,
) -> Result<CsFlags, ModuleError> {
    let c1 = c1_condition(mf, lattice, summand);

    let summand_ids: Vec<usize> = (0..lattice.len()).filter(|&i| summand[i]).collect();
    let profiles: HashMap<usize, _> =
        summand_ids.iter().map(|&i| (i, mf.profile(&lattice.members[i]))).collect();
    let mut sub_facts: HashMap<usize, ModuleFacts> = HashMap::new();
    let mut c2 = Flag::yes();
    'outer: for (i, n) in lattice.members.iter().enumerate() {
        if summand[i] {
            continue;
        }
        let profile = mf.profile(n);
        for &j in &summand_ids {
            if profiles[&j] != profile {
                continue;
            }
            for k in [i, j] {
                sub_facts
                    .entry(k)
                    .or_insert_with(|| ModuleFacts::new(mf.module.submodule(&lattice.members[k]).0));
            }
            if is_isomorphic(&sub_facts[&i], &sub_facts[&j], cap)?.is_some() {
                c2 = Flag::no(Witness::IdealPair(n.to_vec(), lattice.members[j].to_vec()));
                break 'outer;
            }
        }
        sub_facts.remove(&i);
    }

    let mut c3 = Flag::yes();
    'c3: for (x, &i) in summand_ids.iter().enumerate() {
        for &j in &summand_ids[x + 1..] {
            let (a, b) = (&lattice.members[i], &lattice.members[j]);
            if a.intersection_len(b) != 1 {
                continue;
            }
            let sum = mf.sum(a, b);
            let is_summand = lattice.position(&sum).is_some_and(|k| summand[k]);
            if !is_summand {
                c3 = Flag::no(Witness::IdealPair(a.to_vec(), b.to_vec()));
                break 'c3;
            }
        }
    }
    Ok(CsFlags { c1, c2, c3 })
}

/// `{x : ann_R(x) essential in R_R}`, given `rR` for every ring element.
pub fn singular_submodule(mf: &ModuleFacts, ring_principal: &[ElemSet]) -> ElemSet {
    let n = ring_principal.len();
    let members = mf.module.elements().filter(|&x| {
        let ann = &mf.ann[x];
        (0..n).filter(|&r| !ann.contains(r)).all(|r| ring_principal[r].intersection_len(ann) > 1)
    });
    ElemSet::from_elems(mf.order(), members)
}

pub(crate) fn principal_ideals(ring: &FinRing) -> Vec<ElemSet> {
    ring.elements()
        .map(|a| ElemSet::from_elems(ring.order(), ring.mul_row(a).iter().map(|&x| x as usize)))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleClassReport {
    pub label: String,
    pub order: usize,
    pub submodules: usize,
    pub summands: usize,
    pub c1: Flag,
    pub c2: Flag,
    pub c3: Flag,
    pub cs: Flag,
    pub quasi_continuous: Flag,
    pub continuous: Flag,
    pub singular: Vec<Elem>,
    pub nonsingular: Flag,
    pub end_order: usize,
    pub clean: Flag,
    pub almost_clean: Flag,
    #[serde(skip)]
    pub end_cleanness: CleannessReport,
    #[serde(skip)]
    pub end: EndRing,
    /// Summand flags cross-checked against images of idempotent endomorphisms.
    pub summands_match_idempotent_images: bool,
}

impl ModuleClassReport {
    pub fn flags(&self) -> Vec<(&'static str, &Flag)> {
        vec![
            ("C1", &self.c1),
            ("C2", &self.c2),
            ("C3", &self.c3),
            ("CS", &self.cs),
            ("quasi_continuous", &self.quasi_continuous),
            ("continuous", &self.continuous),
            ("nonsingular", &self.nonsingular),
            ("clean", &self.clean),
            ("almost_clean", &self.almost_clean),
        ]
    }

    /// Decompose every endomorphism as idempotent + monomorphism.
    pub fn endo_decompositions(&self, mf: &ModuleFacts) -> Vec<Result<EndoDecomposition, ModuleError>> {
        self.end.ring.elements().map(|f| endo_decompose(mf, &self.end, f)).collect()
    }

    /// Every essential monomorphism in `End(M)` is onto.
    pub fn essential_monos_are_isos(&self, mf: &ModuleFacts) -> Flag {
        for (i, h) in self.end.homs.iter().enumerate() {
            if MonoKind::of(mf, h) == Some(MonoKind::EssentialMono) {
                return Flag::no(Witness::Element(i));
            }
        }
        Flag::yes()
    }
}

pub fn module_class(mf: &ModuleFacts, budgets: &Budgets) -> Result<ModuleClassReport, ModuleError> {
    let m = &mf.module;
    if m.order() > budgets.max_module_order {
        return Err(ModuleError::SizeBudgetExceeded { order: m.order() as u128, cap: budgets.max_module_order });
    }
    let lattice = submodules(mf, budgets.max_ideals)?;
    let summand = lattice.summand_flags(m.order());
    let cs = cs_conditions_in(mf, &lattice, &summand, budgets.max_assignments)?;

    let singular = singular_submodule(mf, &principal_ideals(m.ring()));
    debug_assert!(m.is_submodule(&singular));
    let nonsingular = match singular.iter().find(|&x| x != m.zero()) {
        Some(x) => Flag::no(Witness::Element(x)),
        None => Flag::yes(),
    };

    let end = endomorphism_ring(mf, budgets.max_assignments)?;
    let end_facts = RingFacts::new(end.ring.clone());
    let end_cleanness = classify_cleanness(&end_facts);

    let images: Vec<ElemSet> = end_facts
        .idempotents
        .iter()
        .map(|&e| end.hom(e).image(m.order()))
        .collect();
    let summands_match_idempotent_images = lattice
        .members
        .iter()
        .zip(&summand)
        .all(|(s, &is)| is == images.contains(s));

    Ok(ModuleClassReport {
        label: m.label().to_string(),
        order: m.order(),
        submodules: lattice.len(),
        summands: summand.iter().filter(|&&s| s).count(),
        cs: cs.c1.clone(),
        quasi_continuous: cs.quasi_continuous(),
        continuous: cs.continuous(),
        c1: cs.c1,
        c2: cs.c2,
        c3: cs.c3,
        singular: singular.to_vec(),
        nonsingular,
        end_order: end.order(),
        clean: end_cleanness.clean.clone(),
        almost_clean: end_cleanness.almost_clean.clone(),
        end_cleanness,
        end,
        summands_match_idempotent_images,
    })
}

/// Per-rank (C1) flags for the free modules `R^1, .., R^kmax`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CsLevel {
    pub flags: Vec<(usize, Flag)>,
    /// Largest `k` with `R^k` CS (0 if none).
    pub level: usize,
}

pub fn cs_level(ring: &Arc<FinRing>, kmax: usize, budgets: &Budgets) -> Result<CsLevel, ModuleError> {
    let mut flags = Vec::new();
    for k in 1..=kmax {
        let rank_error = |reason: ModuleError| ModuleError::RankOutOfBudget { k, reason: Box::new(reason) };
        let module = FinModule::free(ring, k, budgets.max_module_order).map_err(rank_error)?;
        let mf = ModuleFacts::new(module);
        let lattice = submodules(&mf, budgets.max_ideals).map_err(rank_error)?;
        let summand = lattice.summand_flags(mf.order());
        flags.push((k, c1_condition(&mf, &lattice, &summand)));
    }
    let level = flags.iter().filter(|(_, f)| f.holds).map(|&(k, _)| k).max().unwrap_or(0);
    Ok(CsLevel { flags, level })
}
