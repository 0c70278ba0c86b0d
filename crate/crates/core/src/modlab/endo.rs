//! Endomorphism rings and idempotent + monomorphism decompositions of endomorphisms.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::ring::{Elem, FinRing, RingTables};
use crate::set::ElemSet;

use super::engine::{HomMode, HomSearch, ModuleFacts, ModuleHom};
use super::{FinModule, ModuleError};

/// `End(M)` as a [`FinRing`], with `(f·g)(x) = f(g(x))`. Ring element `i` is
/// `homs[i]`; homs are ordered lexicographically by value table.
#[derive(Debug, Clone)]
pub struct EndRing {
    pub ring: Arc<FinRing>,
    pub homs: Vec<ModuleHom>,
    index: HashMap<Vec<Elem>, Elem>,
}

impl EndRing {
    pub fn order(&self) -> usize {
        self.homs.len()
    }

    pub fn hom(&self, i: Elem) -> &ModuleHom {
        &self.homs[i]
    }

    pub fn index_of(&self, values: &[Elem]) -> Option<Elem> {
        self.index.get(values).copied()
    }

    pub fn identity(&self) -> Elem {
        self.ring.one()
    }
}

pub fn endomorphism_ring(mf: &ModuleFacts, cap: u64) -> Result<EndRing, ModuleError> {
    let homs = HomSearch::new(mf, mf, HomMode::All, cap).all()?;
    let k = homs.len();
    let index: HashMap<Vec<Elem>, Elem> =
        homs.iter().enumerate().map(|(i, h)| (h.values.clone(), i)).collect();
    let m = &mf.module;
    let lookup = |v: Vec<Elem>| index[&v] as u32;
    let mut add = vec![0u32; k * k];
    let mut mul = vec![0u32; k * k];
    for (i, f) in homs.iter().enumerate() {
        for (j, g) in homs.iter().enumerate() {
            add[i * k + j] = lookup(m.elements().map(|x| m.add(f.apply(x), g.apply(x))).collect());
            mul[i * k + j] = lookup(m.elements().map(|x| f.apply(g.apply(x))).collect());
        }
    }
    let ring = FinRing::from_tables(format!("End({})", m.label()), RingTables { order: k, add, mul, star: None })?;
    Ok(EndRing { ring: Arc::new(ring), homs, index })
}

/// Check that `a ↦ L_a` (left multiplication) maps `R` onto `End(R_R)` and
/// preserves both tables. Returns the map as ring indices.
pub fn regular_endomorphism_iso(ring: &Arc<FinRing>, cap: u64) -> Result<Option<Vec<Elem>>, ModuleError> {
    let mf = ModuleFacts::new(FinModule::regular(ring));
    let end = endomorphism_ring(&mf, cap)?;
    if end.order() != ring.order() {
        return Ok(None);
    }
    let mut map = Vec::with_capacity(ring.order());
    for a in ring.elements() {
        let la: Vec<Elem> = ring.elements().map(|x| ring.mul(a, x)).collect();
        match end.index_of(&la) {
            Some(i) => map.push(i),
            None => return Ok(None),
        }
    }
    let e = &end.ring;
    for a in ring.elements() {
        for b in ring.elements() {
            if map[ring.add(a, b)] != e.add(map[a], map[b]) || map[ring.mul(a, b)] != e.mul(map[a], map[b]) {
                return Ok(None);
            }
        }
    }
    Ok(Some(map))
}

/// Injective with essential image.
pub fn is_essential_mono(mf: &ModuleFacts, f: &ModuleHom) -> bool {
    f.is_injective(mf.module.zero()) && mf.essential_unchecked(&f.image(mf.order()), &ElemSet::full(mf.order()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonoKind {
    Mono,
    EssentialMono,
    Iso,
}

impl MonoKind {
    pub fn of(mf: &ModuleFacts, f: &ModuleHom) -> Option<MonoKind> {
        if !f.is_injective(mf.module.zero()) {
            None
        } else if f.image(mf.order()).len() == mf.order() {
            Some(MonoKind::Iso)
        } else if is_essential_mono(mf, f) {
            Some(MonoKind::EssentialMono)
        } else {
            Some(MonoKind::Mono)
        }
    }
}

/// `f = e + u` with `e` idempotent in `End(M)` and `u` injective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndoDecomposition {
    pub endomorphism: Elem,
    pub idempotent: Elem,
    pub complement: Elem,
    pub kind: MonoKind,
}

/// The decomposition with the strongest complement kind (iso, then essential
/// mono, then mono), least idempotent index among ties.
pub fn endo_decompose(mf: &ModuleFacts, end: &EndRing, f: Elem) -> Result<EndoDecomposition, ModuleError> {
    let r = &end.ring;
    let mut best: Option<EndoDecomposition> = None;
    for e in r.elements().filter(|&e| r.mul(e, e) == e) {
        let u = r.sub(f, e);
        if let Some(kind) = MonoKind::of(mf, end.hom(u)) {
            if best.as_ref().is_none_or(|b| kind > b.kind) {
                best = Some(EndoDecomposition { endomorphism: f, idempotent: e, complement: u, kind });
            }
        }
    }
    best.ok_or(ModuleError::NoDecomposition(f))
}
