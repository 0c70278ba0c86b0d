//! Finite rings given by their operation tables.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// An element of a finite ring: a dense index in `0..order`.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("malformed tables: {0}")]
    BadTables(String),
    #[error("not an abelian group: {law} fails at {witness:?}")]
    NotAGroup { law: &'static str, witness: Vec<Elem> },
    #[error("multiplication is not associative at {witness:?}")]
    NotAssociative { witness: [Elem; 3] },
    #[error("no two-sided multiplicative identity")]
    NoIdentity,
    #[error("{side} distributive law fails at {witness:?}")]
    NotDistributive { side: &'static str, witness: [Elem; 3] },
    #[error("bad involution: {law} fails at {witness:?}")]
    BadInvolution { law: &'static str, witness: [Elem; 2] },
    #[error("involution `{kind}` not available: {reason}")]
    InvolutionUnsupported { kind: &'static str, reason: String },
    #[error("gf({0}, _) requires a prime characteristic")]
    NonPrimeCharacteristic(usize),
    #[error("ring of order {order} exceeds the order cap {cap}")]
    SizeBudgetExceeded { order: u128, cap: usize },
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}: {message}")]
    File { path: String, message: String },
}

/// How a ring was assembled, kept so that structural involutions
/// (transpose, swap) can be computed on the index encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layout {
    Plain,
    /// Full `size × size` matrices; entries row-major, first entry most significant.
    Matrix {
        base_order: usize,
        size: usize,
        base_star: Option<Vec<u32>>,
    },
    /// Upper-triangular matrices; the entries `(i, j)` with `i <= j`, row-major.
    UpperTri {
        base_order: usize,
        size: usize,
        base_star: Option<Vec<u32>>,
    },
    /// `index = left * right_order + right`.
    Product {
        left_order: usize,
        right_order: usize,
        equal_factors: bool,
    },
}

/// Raw operation tables, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingTables {
    pub order: usize,
    pub add: Vec<u32>,
    pub mul: Vec<u32>,
    pub star: Option<Vec<u32>>,
}

impl RingTables {
    pub fn from_rows(add: &[Vec<u32>], mul: &[Vec<u32>], star: Option<Vec<u32>>) -> Self {
        RingTables {
            order: add.len(),
            add: add.iter().flatten().copied().collect(),
            mul: mul.iter().flatten().copied().collect(),
            star,
        }
    }

    fn check_shape(&self) -> Result<(), RingError> {
        let n = self.order;
        if n == 0 {
            return Err(RingError::BadTables("order must be positive".into()));
        }
        if self.add.len() != n * n || self.mul.len() != n * n {
            return Err(RingError::BadTables(format!(
                "expected {n}x{n} add and mul tables"
            )));
        }
        if let Some(star) = &self.star {
            if star.len() != n {
                return Err(RingError::BadTables(format!("star table must have {n} entries")));
            }
        }
        let in_range = |t: &[u32]| t.iter().all(|&x| (x as usize) < n);
        if !in_range(&self.add)
            || !in_range(&self.mul)
            || !self.star.as_deref().is_none_or(in_range)
        {
            return Err(RingError::BadTables(format!("entries must lie in 0..{n}")));
        }
        Ok(())
    }
}

/// A validated finite ring with identity, optionally with an involution.
///
/// Immutable once built; every constructor goes through [`FinRing::from_tables`].
#[derive(Clone, PartialEq, Eq)]
pub struct FinRing {
    order: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    mul: Vec<u32>,
    zero: Elem,
    one: Elem,
    star: Option<Vec<u32>>,
    label: String,
    layout: Layout,
}

impl fmt::Debug for FinRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinRing")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("star", &self.star.is_some())
            .finish()
    }
}

/// Validate raw tables into a ring labelled `raw`.
pub fn validate_ring(tables: RingTables) -> Result<FinRing, RingError> {
    FinRing::from_tables("raw", tables)
}

impl FinRing {
    /// Check every ring axiom by full table scan.
    pub fn from_tables(label: impl Into<String>, tables: RingTables) -> Result<FinRing, RingError> {
        Self::from_tables_with_layout(label, tables, Layout::Plain)
    }

    pub(crate) fn from_tables_with_layout(
        label: impl Into<String>,
        tables: RingTables,
        layout: Layout,
    ) -> Result<FinRing, RingError> {
        tables.check_shape()?;
        let n = tables.order;
        let add = |a: usize, b: usize| tables.add[a * n + b] as usize;
        let mul = |a: usize, b: usize| tables.mul[a * n + b] as usize;

        let zero = (0..n)
            .find(|&z| (0..n).all(|a| add(z, a) == a))
            .ok_or(RingError::NotAGroup { law: "additive identity", witness: vec![] })?;
        for a in 0..n {
            for b in 0..n {
                if add(a, b) != add(b, a) {
                    return Err(RingError::NotAGroup { law: "commutativity", witness: vec![a, b] });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = add(a, b);
                for c in 0..n {
                    if add(ab, c) != add(a, add(b, c)) {
                        return Err(RingError::NotAGroup {
                            law: "associativity",
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
        let neg = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| add(a, b) == zero)
                    .map(|b| b as u32)
                    .ok_or(RingError::NotAGroup { law: "inverse", witness: vec![a] })
            })
            .collect::<Result<Vec<u32>, _>>()?;

        let one = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or(RingError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(RingError::NotAssociative { witness: [a, b, c] });
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(a, add(b, c)) != add(mul(a, b), mul(a, c)) {
                        return Err(RingError::NotDistributive { side: "left", witness: [a, b, c] });
                    }
                    if mul(add(a, b), c) != add(mul(a, c), mul(b, c)) {
                        return Err(RingError::NotDistributive { side: "right", witness: [a, b, c] });
                    }
                }
            }
        }

        let RingTables { add, mul, star, .. } = tables;
        let ring = FinRing {
            order: n,
            add,
            neg,
            mul,
            zero,
            one,
            star: None,
            label: label.into(),
            layout,
        };
        match star {
            Some(star) => ring.with_star(star),
            None => Ok(ring),
        }
    }

    /// Install `star` after checking the involution axioms.
    pub fn with_star(mut self, star: Vec<u32>) -> Result<FinRing, RingError> {
        if star.len() != self.order || star.iter().any(|&x| x as usize >= self.order) {
            return Err(RingError::BadTables("star table has the wrong shape".into()));
        }
        check_involution(&self, &star)?;
        self.star = Some(star);
        Ok(self)
    }

    pub fn without_star(mut self) -> FinRing {
        self.star = None;
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a * self.order + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        self.zero
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn star_table(&self) -> Option<&[u32]> {
        self.star.as_deref()
    }

    pub fn has_star(&self) -> bool {
        self.star.is_some()
    }

    /// `a*`, when an involution is attached.
    #[inline]
    pub fn star(&self, a: Elem) -> Option<Elem> {
        self.star.as_ref().map(|s| s[a] as usize)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> FinRing {
        self.label = label.into();
        self
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// Raw add row slice for element `a`.
    pub(crate) fn mul_row(&self, a: Elem) -> &[u32] {
        &self.mul[a * self.order..(a + 1) * self.order]
    }

    pub fn tables(&self) -> RingTables {
        RingTables {
            order: self.order,
            add: self.add.clone(),
            mul: self.mul.clone(),
            star: self.star.clone(),
        }
    }

    /// First pair `(a, b)` with `ab != ba`, if any.
    pub fn noncommuting_pair(&self) -> Option<(Elem, Elem)> {
        for a in self.elements() {
            for b in a + 1..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        self.noncommuting_pair().is_none()
    }

    /// `k · a` for a non-negative integer `k`.
    pub fn times(&self, k: usize, a: Elem) -> Elem {
        (0..k).fold(self.zero, |acc, _| self.add(acc, a))
    }

    pub fn additive_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.zero {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// Additive order of the identity.
    pub fn characteristic(&self) -> usize {
        self.additive_order(self.one)
    }

    /// The opposite ring: same set, `a ∘ b = b · a`. An attached involution
    /// remains an involution of the opposite ring.
    pub fn opposite(&self) -> FinRing {
        let n = self.order;
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = self.mul[b * n + a];
            }
        }
        FinRing {
            order: n,
            add: self.add.clone(),
            neg: self.neg.clone(),
            mul,
            zero: self.zero,
            one: self.one,
            star: self.star.clone(),
            label: format!("opposite({})", self.label),
            layout: Layout::Plain,
        }
    }
}

fn check_involution(ring: &FinRing, star: &[u32]) -> Result<(), RingError> {
    let s = |a: usize| star[a] as usize;
    for a in ring.elements() {
        if s(s(a)) != a {
            return Err(RingError::BadInvolution { law: "a** = a", witness: [a, a] });
        }
    }
    if s(ring.one()) != ring.one() {
        return Err(RingError::BadInvolution { law: "1* = 1", witness: [ring.one(), ring.one()] });
    }
    for a in ring.elements() {
        for b in ring.elements() {
            if s(ring.add(a, b)) != ring.add(s(a), s(b)) {
                return Err(RingError::BadInvolution { law: "(a+b)* = a*+b*", witness: [a, b] });
            }
            if s(ring.mul(a, b)) != ring.mul(s(b), s(a)) {
                return Err(RingError::BadInvolution { law: "(ab)* = b*a*", witness: [a, b] });
            }
        }
    }
    Ok(())
}
