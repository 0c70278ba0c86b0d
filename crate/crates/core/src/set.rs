//! Dense subsets of a finite carrier `{0..n}`.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::ring::Elem;

/// A subset of `{0, .., capacity}` stored as a bitset.
///
/// Ordering is the canonical one used throughout reports: by cardinality, then
/// lexicographically by the sorted member list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet(FixedBitSet);

impl ElemSet {
    pub fn empty(capacity: usize) -> Self {
        ElemSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        ElemSet(bits)
    }

    pub fn singleton(capacity: usize, x: Elem) -> Self {
        let mut s = Self::empty(capacity);
        s.insert(x);
        s
    }

    pub fn from_elems(capacity: usize, elems: impl IntoIterator<Item = Elem>) -> Self {
        let mut s = Self::empty(capacity);
        for x in elems {
            s.insert(x);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.0.contains(x)
    }

    #[inline]
    pub fn insert(&mut self, x: Elem) -> bool {
        !self.0.put(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.0.ones().collect()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection_len(&self, other: &ElemSet) -> usize {
        self.0.intersection_count(&other.0)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut out = self.0.clone();
        out.intersect_with(&other.0);
        ElemSet(out)
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        self.0.union_with(&other.0);
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<Elem> {
        self.0.minimum()
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.ones().cmp(other.0.ones()))
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.ones().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}
