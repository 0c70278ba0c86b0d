//! Finite right modules over a [`FinRing`]: construction, submodule lattices,
//! homomorphism search and endomorphism rings.

mod class;
mod endo;
mod engine;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::budget::BudgetExceeded;
use crate::dsl::ModuleExpr;
use crate::ring::{Elem, FinRing, RingError};
use crate::set::ElemSet;

pub use class::{cs_level, module_class, singular_submodule, CsFlags, CsLevel, ModuleClassReport};
pub(crate) use class::cs_conditions_in;
pub use endo::{
    endo_decompose, endomorphism_ring, is_essential_mono, regular_endomorphism_iso, EndRing,
    EndoDecomposition, MonoKind,
};
pub use engine::{is_isomorphic, submodules, HomMode, HomSearch, ModuleFacts, ModuleHom, SubmoduleLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("not an abelian group: {law} fails at {witness:?}")]
    NotAGroup { law: &'static str, witness: Vec<Elem> },
    #[error("module action axiom {law} fails at {witness:?}")]
    BadAction { law: &'static str, witness: [Elem; 3] },
    #[error("malformed module tables: {0}")]
    BadTables(String),
    #[error("module of order {order} exceeds the module order cap {cap}")]
    SizeBudgetExceeded { order: u128, cap: usize },
    #[error("{0} is not a right ideal / submodule")]
    NotASubmodule(String),
    #[error("first set is not contained in the second")]
    NotContained,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("free module of rank {k} is out of budget: {reason}")]
    RankOutOfBudget { k: usize, reason: Box<ModuleError> },
    #[error("endomorphism {0} has no idempotent + monomorphism decomposition")]
    NoDecomposition(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Raw module tables: `add` is `order × order`, `action` is `order × |R|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleTables {
    pub order: usize,
    pub add: Vec<u32>,
    pub action: Vec<u32>,
}

/// A finite right `R`-module.
#[derive(Clone, PartialEq, Eq)]
pub struct FinModule {
    ring: Arc<FinRing>,
    order: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    zero: Elem,
    action: Vec<u32>,
    label: String,
}

impl fmt::Debug for FinModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinModule")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("ring", &self.ring.label())
            .finish()
    }
}

/// Module shapes accepted by [`build_module`].
#[derive(Debug, Clone)]
pub enum ModuleSpec {
    /// `R^k`, coordinatewise action, lexicographic (first coordinate major).
    Free(usize),
    /// `R / I` for a right ideal `I`, cosets ordered by least member.
    Cyclic(ElemSet),
    DirectSum(Vec<ModuleSpec>),
    Raw(ModuleTables),
}

pub fn build_module(
    ring: &Arc<FinRing>,
    spec: &ModuleSpec,
    max_order: usize,
) -> Result<FinModule, ModuleError> {
    match spec {
        ModuleSpec::Free(k) => FinModule::free(ring, *k, max_order),
        ModuleSpec::Cyclic(ideal) => {
            let regular = FinModule::regular(ring);
            if !regular.is_submodule(ideal) {
                return Err(ModuleError::NotASubmodule(ideal.to_string()));
            }
            Ok(regular.quotient(ideal))
        }
        ModuleSpec::DirectSum(parts) => {
            let built = parts
                .iter()
                .map(|p| build_module(ring, p, max_order))
                .collect::<Result<Vec<_>, _>>()?;
            FinModule::direct_sum(ring, &built, max_order)
        }
        ModuleSpec::Raw(tables) => FinModule::from_tables(ring, "raw", tables.clone()),
    }
}

/// Build a module from a DSL expression; `cyclic(g, ..)` is `R` modulo the
/// right ideal generated by the `g`s, `Ref` names resolve through `named`.
pub fn module_from_expr(
    ring: &Arc<FinRing>,
    expr: &ModuleExpr,
    named: &HashMap<String, Arc<FinModule>>,
    max_order: usize,
) -> Result<FinModule, ModuleError> {
    match expr {
        ModuleExpr::Free(k) => FinModule::free(ring, *k, max_order),
        ModuleExpr::Cyclic(gens) => {
            if let Some(&g) = gens.iter().find(|&&g| g >= ring.order()) {
                return Err(ModuleError::BadTables(format!("generator {g} is not a ring element")));
            }
            let regular = ModuleFacts::new(FinModule::regular(ring));
            let ideal = regular.span(gens.iter().copied());
            Ok(regular.module.quotient(&ideal).with_label(format!("{}/{}", ring.label(), ideal)))
        }
        ModuleExpr::Sum(parts) => {
            let built = parts
                .iter()
                .map(|p| module_from_expr(ring, p, named, max_order))
                .collect::<Result<Vec<_>, _>>()?;
            FinModule::direct_sum(ring, &built, max_order)
        }
        ModuleExpr::Ref(name) => match named.get(name) {
            Some(m) if m.ring() == ring => Ok((**m).clone()),
            Some(_) => Err(ModuleError::BadTables(format!("module {name} is over a different ring"))),
            None => Err(ModuleError::BadTables(format!("unknown module {name}"))),
        },
    }
}

impl FinModule {
    /// Validate raw tables: abelian group plus the four action axioms.
    pub fn from_tables(
        ring: &Arc<FinRing>,
        label: impl Into<String>,
        tables: ModuleTables,
    ) -> Result<FinModule, ModuleError> {
        let m = tables.order;
        let n = ring.order();
        if m == 0 || tables.add.len() != m * m || tables.action.len() != m * n {
            return Err(ModuleError::BadTables(format!(
                "expected {m}x{m} add and {m}x{n} action tables"
            )));
        }
        if tables.add.iter().chain(&tables.action).any(|&x| x as usize >= m) {
            return Err(ModuleError::BadTables(format!("entries must lie in 0..{m}")));
        }
        let add = |a: usize, b: usize| tables.add[a * m + b] as usize;
        let act = |x: usize, r: usize| tables.action[x * n + r] as usize;
        let zero = (0..m)
            .find(|&z| (0..m).all(|a| add(z, a) == a))
            .ok_or(ModuleError::NotAGroup { law: "additive identity", witness: vec![] })?;
        for a in 0..m {
            for b in 0..m {
                if add(a, b) != add(b, a) {
                    return Err(ModuleError::NotAGroup { law: "commutativity", witness: vec![a, b] });
                }
                for c in 0..m {
                    if add(add(a, b), c) != add(a, add(b, c)) {
                        return Err(ModuleError::NotAGroup {
                            law: "associativity",
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
        let neg = (0..m)
            .map(|a| {
                (0..m)
                    .find(|&b| add(a, b) == zero)
                    .map(|b| b as u32)
                    .ok_or(ModuleError::NotAGroup { law: "inverse", witness: vec![a] })
            })
            .collect::<Result<Vec<u32>, _>>()?;
        for x in 0..m {
            if act(x, ring.one()) != x {
                return Err(ModuleError::BadAction { law: "x·1 = x", witness: [x, ring.one(), 0] });
            }
            for r in 0..n {
                for y in 0..m {
                    if act(add(x, y), r) != add(act(x, r), act(y, r)) {
                        return Err(ModuleError::BadAction { law: "(x+y)r = xr+yr", witness: [x, y, r] });
                    }
                }
                for s in 0..n {
                    if act(x, ring.add(r, s)) != add(act(x, r), act(x, s)) {
                        return Err(ModuleError::BadAction { law: "x(r+s) = xr+xs", witness: [x, r, s] });
                    }
                    if act(x, ring.mul(r, s)) != act(act(x, r), s) {
                        return Err(ModuleError::BadAction { law: "x(rs) = (xr)s", witness: [x, r, s] });
                    }
                }
            }
        }
        Ok(FinModule {
            ring: ring.clone(),
            order: m,
            add: tables.add,
            neg,
            zero,
            action: tables.action,
            label: label.into(),
        })
    }

    /// The regular module `R_R`.
    pub fn regular(ring: &Arc<FinRing>) -> FinModule {
        let t = ring.tables();
        FinModule {
            ring: ring.clone(),
            order: ring.order(),
            neg: ring.elements().map(|a| ring.neg(a) as u32).collect(),
            add: t.add,
            zero: ring.zero(),
            action: t.mul,
            label: format!("{}_R", ring.label()),
        }
    }

    pub fn free(ring: &Arc<FinRing>, k: usize, max_order: usize) -> Result<FinModule, ModuleError> {
        let mut parts = Vec::with_capacity(k);
        for _ in 0..k {
            parts.push(FinModule::regular(ring));
        }
        let mut m = FinModule::direct_sum(ring, &parts, max_order)?;
        m.label = format!("free({}, {k})", ring.label());
        Ok(m)
    }

    pub fn direct_sum(
        ring: &Arc<FinRing>,
        parts: &[FinModule],
        max_order: usize,
    ) -> Result<FinModule, ModuleError> {
        let order = parts.iter().fold(1u128, |acc, p| acc.saturating_mul(p.order as u128));
        if order > max_order as u128 {
            return Err(ModuleError::SizeBudgetExceeded { order, cap: max_order });
        }
        let m = order as usize;
        let n = ring.order();
        let orders: Vec<usize> = parts.iter().map(|p| p.order).collect();
        let decode = |mut v: usize| -> Vec<usize> {
            let mut c = vec![0; orders.len()];
            for i in (0..orders.len()).rev() {
                c[i] = v % orders[i];
                v /= orders[i];
            }
            c
        };
        let encode = |c: &[usize]| c.iter().zip(&orders).fold(0, |acc, (&x, &o)| acc * o + x);
        let coords: Vec<Vec<usize>> = (0..m).map(decode).collect();
        let mut add = vec![0u32; m * m];
        let mut action = vec![0u32; m * n];
        let mut buf = vec![0usize; orders.len()];
        for x in 0..m {
            for y in 0..m {
                for (i, p) in parts.iter().enumerate() {
                    buf[i] = p.add(coords[x][i], coords[y][i]);
                }
                add[x * m + y] = encode(&buf) as u32;
            }
            for r in 0..n {
                for (i, p) in parts.iter().enumerate() {
                    buf[i] = p.act(coords[x][i], r);
                }
                action[x * n + r] = encode(&buf) as u32;
            }
        }
        let neg = (0..m)
            .map(|x| {
                let c: Vec<usize> = parts.iter().enumerate().map(|(i, p)| p.neg(coords[x][i])).collect();
                encode(&c) as u32
            })
            .collect();
        let labels: Vec<&str> = parts.iter().map(|p| p.label.as_str()).collect();
        Ok(FinModule {
            ring: ring.clone(),
            order: m,
            add,
            neg,
            zero: encode(&parts.iter().map(|p| p.zero).collect::<Vec<_>>()),
            action,
            label: format!("sum({})", labels.join(", ")),
        })
    }

    pub fn ring(&self) -> &Arc<FinRing> {
        &self.ring
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        self.zero
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.add[x * self.order + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.neg[x] as usize
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    /// `x · r`.
    #[inline]
    pub fn act(&self, x: Elem, r: Elem) -> Elem {
        self.action[x * self.ring.order() + r] as usize
    }

    pub(crate) fn action_row(&self, x: Elem) -> &[u32] {
        let n = self.ring.order();
        &self.action[x * n..(x + 1) * n]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> FinModule {
        self.label = label.into();
        self
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn tables(&self) -> ModuleTables {
        ModuleTables { order: self.order, add: self.add.clone(), action: self.action.clone() }
    }

    pub fn additive_order(&self, x: Elem) -> usize {
        let (mut k, mut y) = (1, x);
        while y != self.zero {
            y = self.add(y, x);
            k += 1;
        }
        k
    }

    /// Contains zero and is closed under addition and the action.
    pub fn is_submodule(&self, set: &ElemSet) -> bool {
        set.contains(self.zero)
            && set.iter().all(|x| {
                set.iter().all(|y| set.contains(self.add(x, y)))
                    && self.action_row(x).iter().all(|&v| set.contains(v as usize))
            })
    }

    /// Re-index the submodule `set`; returns the module and the inclusion map.
    pub fn submodule(&self, set: &ElemSet) -> (FinModule, Vec<Elem>) {
        let members = set.to_vec();
        let mut back = vec![u32::MAX; self.order];
        for (i, &x) in members.iter().enumerate() {
            back[x] = i as u32;
        }
        let m = members.len();
        let n = self.ring.order();
        let mut add = vec![0u32; m * m];
        let mut action = vec![0u32; m * n];
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate() {
                add[i * m + j] = back[self.add(x, y)];
            }
            for r in 0..n {
                action[i * n + r] = back[self.act(x, r)];
            }
        }
        let module = FinModule {
            ring: self.ring.clone(),
            order: m,
            add,
            neg: members.iter().map(|&x| back[self.neg(x)]).collect(),
            zero: back[self.zero] as usize,
            action,
            label: format!("sub({}, {})", self.label, set),
        };
        (module, members)
    }

    /// `M / N`; cosets are numbered in order of their least member.
    pub fn quotient(&self, sub: &ElemSet) -> FinModule {
        let mut coset = vec![u32::MAX; self.order];
        let mut reps = Vec::new();
        for x in self.elements() {
            if coset[x] == u32::MAX {
                let id = reps.len() as u32;
                for s in sub.iter() {
                    coset[self.add(x, s)] = id;
                }
                reps.push(x);
            }
        }
        let m = reps.len();
        let n = self.ring.order();
        let mut add = vec![0u32; m * m];
        let mut action = vec![0u32; m * n];
        for (i, &x) in reps.iter().enumerate() {
            for (j, &y) in reps.iter().enumerate() {
                add[i * m + j] = coset[self.add(x, y)];
            }
            for r in 0..n {
                action[i * n + r] = coset[self.act(x, r)];
            }
        }
        FinModule {
            ring: self.ring.clone(),
            order: m,
            add,
            neg: reps.iter().map(|&x| coset[self.neg(x)]).collect(),
            zero: coset[self.zero] as usize,
            action,
            label: format!("{}/{}", self.label, sub),
        }
    }
}
