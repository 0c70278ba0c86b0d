//! Element-level classification: idempotents, units, regular elements
//! (non-zero-divisors), projections, annihilators and principal ideals.
//!
//! "Regular" always means "neither a left nor a right zero-divisor". The von
//! Neumann notion (`a = axa`) is called vn-regular and lives in [`crate::lattice`].

use std::sync::Arc;

use serde::Serialize;

use crate::lattice::RightIdeal;
use crate::ring::{Elem, FinRing};
use crate::set::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementClassification {
    pub idempotent: Vec<bool>,
    pub unit: Vec<bool>,
    /// Trivial left annihilator: `xa = 0 ⇒ x = 0`.
    pub left_regular: Vec<bool>,
    /// Trivial right annihilator: `ax = 0 ⇒ x = 0`.
    pub right_regular: Vec<bool>,
    pub regular: Vec<bool>,
    pub central: Vec<bool>,
    /// Self-adjoint idempotents; `None` without an involution.
    pub projection: Option<Vec<bool>>,
    pub inverse: Vec<Option<Elem>>,
}

impl ElementClassification {
    pub fn idempotents(&self) -> impl Iterator<Item = Elem> + '_ {
        indices(&self.idempotent)
    }

    pub fn units(&self) -> impl Iterator<Item = Elem> + '_ {
        indices(&self.unit)
    }

    pub fn regulars(&self) -> impl Iterator<Item = Elem> + '_ {
        indices(&self.regular)
    }

    pub fn projections(&self) -> Vec<Elem> {
        self.projection.as_deref().map(|p| indices(p).collect()).unwrap_or_default()
    }
}

fn indices(flags: &[bool]) -> impl Iterator<Item = Elem> + '_ {
    flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i)
}

pub fn classify_elements(ring: &FinRing) -> ElementClassification {
    let n = ring.order();
    let zero = ring.zero();
    let idempotent: Vec<bool> = ring.elements().map(|a| ring.mul(a, a) == a).collect();
    let right_regular: Vec<bool> =
        ring.elements().map(|a| ring.elements().all(|x| x == zero || ring.mul(a, x) != zero)).collect();
    let left_regular: Vec<bool> =
        ring.elements().map(|a| ring.elements().all(|x| x == zero || ring.mul(x, a) != zero)).collect();
    let inverse: Vec<Option<Elem>> = ring
        .elements()
        .map(|a| {
            ring.elements()
                .find(|&b| ring.mul(a, b) == ring.one() && ring.mul(b, a) == ring.one())
        })
        .collect();
    let central: Vec<bool> = ring
        .elements()
        .map(|a| ring.elements().all(|x| ring.mul(a, x) == ring.mul(x, a)))
        .collect();
    let projection = ring.star_table().map(|s| {
        (0..n).map(|a| idempotent[a] && s[a] as usize == a).collect()
    });
    ElementClassification {
        unit: inverse.iter().map(Option::is_some).collect(),
        regular: (0..n).map(|a| left_regular[a] && right_regular[a]).collect(),
        idempotent,
        left_regular,
        right_regular,
        central,
        projection,
        inverse,
    }
}

/// `{x : ax = 0}`.
pub fn right_annihilator(ring: &FinRing, a: Elem) -> RightIdeal {
    RightIdeal::from_set(ElemSet::from_elems(
        ring.order(),
        ring.elements().filter(|&x| ring.mul(a, x) == ring.zero()),
    ))
}

/// `{x : xa = 0}` (a left ideal).
pub fn left_annihilator(ring: &FinRing, a: Elem) -> ElemSet {
    ElemSet::from_elems(ring.order(), ring.elements().filter(|&x| ring.mul(x, a) == ring.zero()))
}

/// `aR = {ax : x ∈ R}`.
pub fn principal_right_ideal(ring: &FinRing, a: Elem) -> RightIdeal {
    RightIdeal::from_set(ElemSet::from_elems(ring.order(), ring.mul_row(a).iter().map(|&x| x as usize)))
}

/// `Ra = {xa : x ∈ R}`.
pub fn principal_left_ideal(ring: &FinRing, a: Elem) -> ElemSet {
    ElemSet::from_elems(ring.order(), ring.elements().map(|x| ring.mul(x, a)))
}

/// `Ok(())` when every idempotent is central, else the first pair `(e, x)` with `ex != xe`.
pub fn is_abelian(ring: &FinRing) -> Result<(), (Elem, Elem)> {
    for e in ring.elements().filter(|&e| ring.mul(e, e) == e) {
        if let Some(x) = ring.elements().find(|&x| ring.mul(e, x) != ring.mul(x, e)) {
            return Err((e, x));
        }
    }
    Ok(())
}

/// A ring together with its element classification and the principal
/// ideals / annihilators of every element, computed once and shared by the
/// decomposition and lattice checks.
#[derive(Debug, Clone)]
pub struct RingFacts {
    pub ring: Arc<FinRing>,
    pub elements: ElementClassification,
    /// `aR` for every `a`.
    pub right_principal: Vec<ElemSet>,
    /// `ann_r(a)` for every `a`.
    pub right_ann: Vec<ElemSet>,
    /// `ann_l(a)` for every `a`.
    pub left_ann: Vec<ElemSet>,
    pub idempotents: Vec<Elem>,
    pub units: Vec<Elem>,
    pub projections: Vec<Elem>,
    pub abelian: Result<(), (Elem, Elem)>,
}

impl RingFacts {
    pub fn new(ring: impl Into<Arc<FinRing>>) -> Self {
        let ring: Arc<FinRing> = ring.into();
        let elements = classify_elements(&ring);
        let right_principal = ring.elements().map(|a| principal_right_ideal(&ring, a).into_set()).collect();
        let right_ann = ring.elements().map(|a| right_annihilator(&ring, a).into_set()).collect();
        let left_ann = ring.elements().map(|a| left_annihilator(&ring, a)).collect();
        let idempotents = elements.idempotents().collect();
        let units = elements.units().collect();
        let projections = elements.projections();
        let abelian = is_abelian(&ring);
        RingFacts {
            ring,
            elements,
            right_principal,
            right_ann,
            left_ann,
            idempotents,
            units,
            projections,
            abelian,
        }
    }

    pub fn order(&self) -> usize {
        self.ring.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian.is_ok()
    }

    /// `aR ∩ bR = {0}`.
    pub fn principal_meet_is_zero(&self, a: Elem, b: Elem) -> bool {
        self.right_principal[a].intersection_len(&self.right_principal[b]) == 1
    }
}
