//! Flags with witnesses, the common currency of every classifier.

use std::fmt;

use serde::Serialize;

use crate::ring::Elem;

/// Evidence attached to a flag: the least-index counterexample of a failed
/// universal statement, or the witness of a satisfied existential one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Element(Elem),
    Pair(Elem, Elem),
    Ideal(Vec<Elem>),
    IdealPair(Vec<Elem>, Vec<Elem>),
    /// An endomorphism, as its value table.
    Hom(Vec<Elem>),
    Note(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Elem]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Witness::Element(a) => write!(f, "a={a}"),
            Witness::Pair(a, b) => write!(f, "({a},{b})"),
            Witness::Ideal(v) => write!(f, "{{{}}}", list(v)),
            Witness::IdealPair(a, b) => write!(f, "{{{}}} / {{{}}}", list(a), list(b)),
            Witness::Hom(v) => write!(f, "hom[{}]", list(v)),
            Witness::Note(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Flag {
    pub fn yes() -> Self {
        Flag { holds: true, witness: None }
    }

    pub fn yes_with(w: Witness) -> Self {
        Flag { holds: true, witness: Some(w) }
    }

    pub fn no(w: Witness) -> Self {
        Flag { holds: false, witness: Some(w) }
    }

    /// Universal statement over elements: fails at the first `a` where `pred` is false.
    pub fn for_all(range: impl IntoIterator<Item = Elem>, mut pred: impl FnMut(Elem) -> bool) -> Self {
        match range.into_iter().find(|&a| !pred(a)) {
            Some(a) => Flag::no(Witness::Element(a)),
            None => Flag::yes(),
        }
    }

    pub fn and(&self, other: &Flag) -> Flag {
        if !self.holds {
            self.clone()
        } else if !other.holds {
            other.clone()
        } else {
            Flag::yes()
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.holds { "yes" } else { "no" })?;
        if let Some(w) = &self.witness {
            write!(f, " [{w}]")?;
        }
        Ok(())
    }
}
