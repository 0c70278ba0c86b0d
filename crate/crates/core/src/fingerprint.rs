//! Isomorphism-invariant summaries used for catalog deduplication.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::elements::RingFacts;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub idempotents: usize,
    pub units: usize,
    pub central: usize,
    pub characteristic: usize,
    /// `(additive order, count)` pairs, ascending.
    pub additive_orders: Vec<(usize, usize)>,
    /// Hex digest of `additive_orders`.
    pub additive_digest: String,
    /// Number of projections; `None` without an involution.
    pub projections: Option<usize>,
}

fn hex_sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Fingerprint {
    pub fn of(facts: &RingFacts) -> Fingerprint {
        let r = &facts.ring;
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for a in r.elements() {
            *hist.entry(r.additive_order(a)).or_default() += 1;
        }
        let additive_orders: Vec<(usize, usize)> = hist.into_iter().collect();
        let text = additive_orders.iter().map(|(o, c)| format!("{o}:{c}")).collect::<Vec<_>>().join(",");
        Fingerprint {
            order: r.order(),
            idempotents: facts.idempotents.len(),
            units: facts.units.len(),
            central: facts.elements.central.iter().filter(|&&c| c).count(),
            characteristic: r.characteristic(),
            additive_digest: hex_sha256(&text)[..16].to_string(),
            additive_orders,
            projections: r.has_star().then_some(facts.projections.len()),
        }
    }

    /// Short stable hash of the whole vector, used in file names.
    pub fn hash(&self) -> String {
        hex_sha256(&self.to_string())[..16].to_string()
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {}, {}",
            self.order, self.idempotents, self.units, self.central, self.characteristic, self.additive_digest
        )?;
        if let Some(p) = self.projections {
            write!(f, ", *{p}")?;
        }
        write!(f, ")")
    }
}

pub fn fingerprint(facts: &RingFacts) -> Fingerprint {
    Fingerprint::of(facts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct, Environment};
    use crate::dsl::parse_spec;

    fn fp(text: &str) -> Fingerprint {
        let r = construct(&parse_spec(text).unwrap(), &Environment::default(), 4096).unwrap();
        fingerprint(&RingFacts::new(r))
    }

    #[test]
    fn z4() {
        let f = fp("zmod(4)");
        assert_eq!((f.order, f.idempotents, f.units, f.central, f.characteristic), (4, 2, 2, 4, 4));
        assert_eq!(f.additive_orders, vec![(1, 1), (2, 1), (4, 2)]);
    }

    #[test]
    fn z4_differs_from_f2_squared() {
        let a = fp("zmod(4)");
        let b = fp("product(zmod(2), zmod(2))");
        assert_ne!(a, b);
        assert_eq!(b.units, 1);
    }

    #[test]
    fn isomorphic_constructions_agree() {
        assert_eq!(fp("product(zmod(2), zmod(3))"), fp("zmod(6)"));
        assert_eq!(fp("product(gf(3), zmod(2))"), fp("zmod(6)"));
        assert_eq!(fp("opposite(uppertri(gf(2), 2))"), fp("uppertri(gf(2), 2)"));
        assert_eq!(fp("gf(4)").hash(), fp("gf(2, 2)").hash());
    }

    #[test]
    fn involution_is_visible() {
        assert_ne!(fp("zmod(4)"), fp("ring A = zmod(4) with involution identity"));
    }
}
