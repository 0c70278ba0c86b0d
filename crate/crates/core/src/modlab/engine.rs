//! Submodule enumeration and homomorphism search over finite modules.

use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::BudgetExceeded;
use crate::ring::Elem;
use crate::set::ElemSet;

use super::{FinModule, ModuleError};

const UNDEF: u32 = u32::MAX;

/// A module with the cyclic submodule `xR` and annihilator `ann_R(x)` of every
/// element precomputed.
#[derive(Debug, Clone)]
pub struct ModuleFacts {
    pub module: Arc<FinModule>,
    pub cyclic: Vec<ElemSet>,
    pub ann: Vec<ElemSet>,
    pub additive_order: Vec<usize>,
}

impl ModuleFacts {
    pub fn new(module: impl Into<Arc<FinModule>>) -> Self {
        let module: Arc<FinModule> = module.into();
        let m = module.order();
        let n = module.ring().order();
        let mut cyclic = Vec::with_capacity(m);
        let mut ann = Vec::with_capacity(m);
        for x in module.elements() {
            let row = module.action_row(x);
            cyclic.push(ElemSet::from_elems(m, row.iter().map(|&v| v as usize)));
            ann.push(ElemSet::from_elems(
                n,
                (0..n).filter(|&r| row[r] as usize == module.zero()),
            ));
        }
        let additive_order = module.elements().map(|x| module.additive_order(x)).collect();
        ModuleFacts { module, cyclic, ann, additive_order }
    }

    pub fn order(&self) -> usize {
        self.module.order()
    }

    pub fn zero_set(&self) -> ElemSet {
        ElemSet::singleton(self.order(), self.module.zero())
    }

    /// `base + other` for submodules `base`, `other`.
    pub fn sum(&self, base: &ElemSet, other: &ElemSet) -> ElemSet {
        let mut out = base.clone();
        let members: Vec<Elem> = base.iter().collect();
        for b in other.iter() {
            if !out.contains(b) {
                for &s in &members {
                    out.insert(self.module.add(s, b));
                }
            }
        }
        out
    }

    /// `base + xR`.
    pub fn join_cyclic(&self, base: &ElemSet, x: Elem) -> ElemSet {
        self.sum(base, &self.cyclic[x])
    }

    /// The submodule generated by `elems`.
    pub fn span(&self, elems: impl IntoIterator<Item = Elem>) -> ElemSet {
        elems.into_iter().fold(self.zero_set(), |acc, x| self.join_cyclic(&acc, x))
    }

    /// Greedy generating set: repeatedly take the least element that adds the most new elements.
    pub fn generators(&self) -> Vec<Elem> {
        let mut span = self.zero_set();
        let mut gens = Vec::new();
        while span.len() < self.order() {
            let mut best = (0usize, 0usize);
            for x in self.module.elements().filter(|&x| !span.contains(x)) {
                let c = &self.cyclic[x];
                let size = span.len() * c.len() / span.intersection_len(c);
                if size > best.0 {
                    best = (size, x);
                }
            }
            gens.push(best.1);
            span = self.join_cyclic(&span, best.1);
        }
        gens
    }

    /// `small` is essential in `big`: every nonzero `x ∈ big` has `xR ∩ small ≠ 0`.
    pub fn is_essential(&self, small: &ElemSet, big: &ElemSet) -> Result<bool, ModuleError> {
        if !small.is_subset(big) {
            return Err(ModuleError::NotContained);
        }
        Ok(self.essential_unchecked(small, big))
    }

    pub(crate) fn essential_unchecked(&self, small: &ElemSet, big: &ElemSet) -> bool {
        big.iter()
            .filter(|&x| !small.contains(x))
            .all(|x| self.cyclic[x].intersection_len(small) > 1)
    }

    /// Sorted additive-order and annihilator-size profiles of a subset.
    pub fn profile(&self, set: &ElemSet) -> (usize, Vec<usize>, Vec<usize>) {
        let mut orders: Vec<usize> = set.iter().map(|x| self.additive_order[x]).collect();
        let mut anns: Vec<usize> = set.iter().map(|x| self.ann[x].len()).collect();
        orders.sort_unstable();
        anns.sort_unstable();
        (set.len(), orders, anns)
    }
}

/// All submodules, sorted by (size, member list).
#[derive(Debug, Clone)]
pub struct SubmoduleLattice {
    pub members: Vec<ElemSet>,
    pub complete: bool,
    index: HashMap<ElemSet, usize>,
}

impl SubmoduleLattice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, set: &ElemSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn contains(&self, set: &ElemSet) -> bool {
        self.index.contains_key(set)
    }

    /// Summand flags by complement search: `N` is a summand iff some member `N'`
    /// of size `|M|/|N|` meets it in zero.
    pub fn summand_flags(&self, total: usize) -> Vec<bool> {
        let mut by_size: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, s) in self.members.iter().enumerate() {
            by_size.entry(s.len()).or_default().push(i);
        }
        self.members
            .iter()
            .map(|s| {
                total.is_multiple_of(s.len())
                    && by_size
                        .get(&(total / s.len()))
                        .is_some_and(|c| c.iter().any(|&j| self.members[j].intersection_len(s) == 1))
            })
            .collect()
    }
}

/// Enumerate every submodule breadth-first from `{0}` by adjoining one cyclic
/// submodule at a time.
pub fn submodules(mf: &ModuleFacts, max: usize) -> Result<SubmoduleLattice, ModuleError> {
    let zero = mf.zero_set();
    let mut index: HashMap<ElemSet, usize> = HashMap::new();
    let mut found = vec![zero.clone()];
    index.insert(zero, 0);
    let mut next = 0;
    while next < found.len() {
        let base = found[next].clone();
        next += 1;
        let mut seen = base.clone();
        for x in mf.module.elements() {
            if seen.contains(x) {
                continue;
            }
            let joined = mf.join_cyclic(&base, x);
            for s in base.iter() {
                seen.insert(mf.module.add(x, s));
            }
            if !index.contains_key(&joined) {
                if found.len() >= max {
                    return Err(BudgetExceeded { what: "submodules", limit: max as u64 }.into());
                }
                index.insert(joined.clone(), found.len());
                found.push(joined);
            }
        }
    }
    found.sort();
    let index = found.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    Ok(SubmoduleLattice { members: found, complete: true, index })
}

/// A module map as its value table on source indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleHom {
    pub values: Vec<Elem>,
}

impl ModuleHom {
    pub fn apply(&self, x: Elem) -> Elem {
        self.values[x]
    }

    pub fn image(&self, target_order: usize) -> ElemSet {
        ElemSet::from_elems(target_order, self.values.iter().copied())
    }

    pub fn kernel(&self, target_zero: Elem) -> ElemSet {
        ElemSet::from_elems(
            self.values.len(),
            self.values.iter().enumerate().filter(|(_, &v)| v == target_zero).map(|(i, _)| i),
        )
    }

    pub fn is_injective(&self, target_zero: Elem) -> bool {
        self.values.iter().filter(|&&v| v == target_zero).count() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomMode {
    All,
    Mono,
    Iso,
}

/// Backtracking search over generator images with closure propagation.
pub struct HomSearch<'a> {
    src: &'a ModuleFacts,
    tgt: &'a ModuleFacts,
    mode: HomMode,
    cap: u64,
    used: u64,
    gens: Vec<Elem>,
    candidates: Vec<Vec<Elem>>,
    values: Vec<u32>,
    trail: Vec<Elem>,
}

impl<'a> HomSearch<'a> {
    pub fn new(src: &'a ModuleFacts, tgt: &'a ModuleFacts, mode: HomMode, cap: u64) -> Self {
        let gens = src.generators();
        let exact = mode != HomMode::All;
        let candidates = gens
            .iter()
            .map(|&g| {
                tgt.module
                    .elements()
                    .filter(|&b| {
                        if exact {
                            src.ann[g] == tgt.ann[b]
                        } else {
                            src.ann[g].is_subset(&tgt.ann[b])
                        }
                    })
                    .collect()
            })
            .collect();
        let mut values = vec![UNDEF; src.order()];
        values[src.module.zero()] = tgt.module.zero() as u32;
        HomSearch {
            src,
            tgt,
            mode,
            cap,
            used: 0,
            gens,
            candidates,
            values,
            trail: vec![src.module.zero()],
        }
    }

    /// Partial assignments tried so far.
    pub fn assignments(&self) -> u64 {
        self.used
    }

    pub fn first(mut self) -> Result<Option<ModuleHom>, BudgetExceeded> {
        if self.mode == HomMode::Iso && self.src.order() != self.tgt.order() {
            return Ok(None);
        }
        let mut out = None;
        self.descend(0, &mut |v| {
            out = Some(ModuleHom { values: v.iter().map(|&x| x as usize).collect() });
            false
        })?;
        Ok(out)
    }

    pub fn all(mut self) -> Result<Vec<ModuleHom>, BudgetExceeded> {
        if self.mode == HomMode::Iso && self.src.order() != self.tgt.order() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        self.descend(0, &mut |v| {
            out.push(ModuleHom { values: v.iter().map(|&x| x as usize).collect() });
            true
        })?;
        out.sort();
        Ok(out)
    }

    /// Returns `Ok(false)` once the visitor asks to stop.
    fn descend(&mut self, level: usize, visit: &mut dyn FnMut(&[u32]) -> bool) -> Result<bool, BudgetExceeded> {
        if level == self.gens.len() {
            return Ok(visit(&self.values));
        }
        let g = self.gens[level];
        for i in 0..self.candidates[level].len() {
            let b = self.candidates[level][i];
            self.used += 1;
            if self.used > self.cap {
                return Err(BudgetExceeded { what: "hom search assignments", limit: self.cap });
            }
            let mark = self.trail.len();
            if self.extend(g, b) && !self.descend(level + 1, visit)? {
                return Ok(false);
            }
            for &x in &self.trail[mark..] {
                self.values[x] = UNDEF;
            }
            self.trail.truncate(mark);
        }
        Ok(true)
    }

    /// Extend the map from its current domain `D` to `D + gR` with `g ↦ b`.
    fn extend(&mut self, g: Elem, b: Elem) -> bool {
        let (s, t) = (&self.src.module, &self.tgt.module);
        let mono = self.mode != HomMode::All;
        let tz = t.zero() as u32;
        let old = self.trail.len();
        let (grow, brow) = (s.action_row(g), t.action_row(b));
        for r in 0..grow.len() {
            let (y, v) = (grow[r] as usize, brow[r]);
            match self.values[y] {
                UNDEF => {
                    if mono && v == tz {
                        return false;
                    }
                    self.values[y] = v;
                    self.trail.push(y);
                }
                w if w != v => return false,
                _ => {}
            }
        }
        let fresh = self.trail.len();
        for i in 0..old {
            let d = self.trail[i];
            let fd = self.values[d] as usize;
            for j in old..fresh {
                let y = self.trail[j];
                let z = s.add(d, y);
                if self.values[z] == UNDEF {
                    let v = t.add(fd, self.values[y] as usize) as u32;
                    if mono && v == tz {
                        return false;
                    }
                    self.values[z] = v;
                    self.trail.push(z);
                }
            }
        }
        true
    }
}

/// Module isomorphism with an invariant prefilter; returns an isomorphism when one exists.
pub fn is_isomorphic(a: &ModuleFacts, b: &ModuleFacts, cap: u64) -> Result<Option<ModuleHom>, BudgetExceeded> {
    let full = |mf: &ModuleFacts| ElemSet::full(mf.order());
    if a.profile(&full(a)) != b.profile(&full(b)) {
        return Ok(None);
    }
    HomSearch::new(a, b, HomMode::Iso, cap).first()
}

#[cfg(test)]
mod tests {
    use super::super::tests::ring;
    use super::super::{build_module, ModuleSpec};
    use super::*;

    fn facts(m: FinModule) -> ModuleFacts {
        ModuleFacts::new(m)
    }

    #[test]
    fn subspaces_of_gf2_squared() {
        let f2 = ring("gf(2)");
        let v = facts(FinModule::free(&f2, 2, 1024).unwrap());
        let lat = submodules(&v, 1000).unwrap();
        assert_eq!(lat.len(), 5);
        assert!(lat.summand_flags(4).iter().all(|&s| s));
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // number of subspaces of GF(q)^k: sum of Gaussian binomials
        fn gauss(k: u64, j: u64, q: u64) -> u64 {
            let mut num = 1u64;
            let mut den = 1u64;
            for i in 0..j {
                num *= q.pow((k - i) as u32) - 1;
                den *= q.pow((i + 1) as u32) - 1;
            }
            num / den
        }
        for (spec, q, k) in [("gf(2)", 2, 3), ("gf(3)", 3, 2), ("gf(2)", 2, 4)] {
            let r = ring(spec);
            let v = facts(FinModule::free(&r, k as usize, 1024).unwrap());
            let total: u64 = (0..=k).map(|j| gauss(k, j, q)).sum();
            assert_eq!(submodules(&v, 100_000).unwrap().len() as u64, total, "{spec}^{k}");
        }
    }

    #[test]
    fn lattice_is_closed_under_sum_and_meet() {
        let r = ring("uppertri(gf(2), 2)");
        let mf = facts(FinModule::regular(&r));
        let lat = submodules(&mf, 1000).unwrap();
        for a in &lat.members {
            assert!(mf.module.is_submodule(a));
            for b in &lat.members {
                assert!(lat.contains(&mf.sum(a, b)));
                assert!(lat.contains(&a.intersection(b)));
            }
        }
    }

    #[test]
    fn essentiality() {
        let z4 = ring("zmod(4)");
        let mf = facts(FinModule::regular(&z4));
        let two = ElemSet::from_elems(4, [0, 2]);
        let all = ElemSet::full(4);
        assert!(mf.is_essential(&two, &all).unwrap());
        assert!(!mf.is_essential(&mf.zero_set(), &all).unwrap());
        assert!(mf.is_essential(&two, &two).unwrap());
        assert!(matches!(mf.is_essential(&all, &two), Err(ModuleError::NotContained)));
        let zero = facts(FinModule::free(&z4, 0, 1024).unwrap());
        assert!(zero.is_essential(&zero.zero_set(), &zero.zero_set()).unwrap());
    }

    #[test]
    fn hom_counts() {
        let z4 = ring("zmod(4)");
        let r = facts(FinModule::regular(&z4));
        assert_eq!(HomSearch::new(&r, &r, HomMode::All, 1000).all().unwrap().len(), 4);
        assert_eq!(HomSearch::new(&r, &r, HomMode::Iso, 1000).all().unwrap().len(), 2);
        let q = facts(build_module(&z4, &ModuleSpec::Cyclic(ElemSet::from_elems(4, [0, 2])), 64).unwrap());
        // Hom(Z4, Z2) = Z2 and Hom(Z2, Z4) = Z2
        assert_eq!(HomSearch::new(&r, &q, HomMode::All, 1000).all().unwrap().len(), 2);
        assert_eq!(HomSearch::new(&q, &r, HomMode::All, 1000).all().unwrap().len(), 2);
        let f2 = ring("gf(2)");
        let v = facts(FinModule::free(&f2, 2, 1024).unwrap());
        assert_eq!(HomSearch::new(&v, &v, HomMode::All, 1000).all().unwrap().len(), 16);
        assert_eq!(HomSearch::new(&v, &v, HomMode::Iso, 1000).all().unwrap().len(), 6);
    }

    #[test]
    fn homs_are_linear() {
        let r = ring("uppertri(gf(2), 2)");
        let mf = facts(FinModule::regular(&r));
        let m = &mf.module;
        for h in HomSearch::new(&mf, &mf, HomMode::All, 10_000).all().unwrap() {
            for x in m.elements() {
                for y in m.elements() {
                    assert_eq!(h.apply(m.add(x, y)), m.add(h.apply(x), h.apply(y)));
                }
                for s in r.elements() {
                    assert_eq!(h.apply(m.act(x, s)), m.act(h.apply(x), s));
                }
            }
        }
    }

    #[test]
    fn isomorphism_and_budget() {
        let z4 = ring("zmod(4)");
        let reg = facts(FinModule::regular(&z4));
        let (two, _) = reg.module.submodule(&ElemSet::from_elems(4, [0, 2]));
        let q = reg.module.quotient(&ElemSet::from_elems(4, [0, 2]));
        assert!(is_isomorphic(&facts(two), &facts(q), 100).unwrap().is_some());
        let v = facts(FinModule::free(&ring("gf(2)"), 3, 1024).unwrap());
        assert!(matches!(
            HomSearch::new(&v, &v, HomMode::All, 5).all(),
            Err(BudgetExceeded { .. })
        ));
    }

    #[test]
    fn generators_span() {
        let f3 = ring("gf(3)");
        let v = facts(FinModule::free(&f3, 3, 1024).unwrap());
        let g = v.generators();
        assert_eq!(g.len(), 3);
        assert_eq!(v.span(g.iter().copied()).len(), 27);
    }
}
