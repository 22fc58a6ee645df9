use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The index set supports live in: the classes `0..n` of a finite family, or ℕ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Universe {
    Finite(usize),
    Naturals,
}

/// A finite set, or the complement of a finite set (only over ℕ).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportDescriptor {
    Finite(BTreeSet<usize>),
    /// Everything except the listed indices.
    Cofinite(BTreeSet<usize>),
}

impl fmt::Display for SupportDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<usize>| {
            s.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            SupportDescriptor::Finite(s) => write!(f, "{{{}}}", list(s)),
            SupportDescriptor::Cofinite(s) if s.is_empty() => write!(f, "N"),
            SupportDescriptor::Cofinite(s) => write!(f, "N\\{{{}}}", list(s)),
        }
    }
}

impl SupportDescriptor {
    pub fn finite(universe: Universe, set: BTreeSet<usize>) -> Result<Self> {
        let d = SupportDescriptor::Finite(set);
        d.check_canonical(universe)?;
        Ok(d)
    }

    pub fn cofinite(universe: Universe, excluded: BTreeSet<usize>) -> Result<Self> {
        let d = SupportDescriptor::Cofinite(excluded);
        d.check_canonical(universe)?;
        Ok(d)
    }

    pub fn empty() -> Self {
        SupportDescriptor::Finite(BTreeSet::new())
    }

    /// Everything in the universe.
    pub fn full(universe: Universe) -> Self {
        match universe {
            Universe::Finite(n) => SupportDescriptor::Finite((0..n).collect()),
            Universe::Naturals => SupportDescriptor::Cofinite(BTreeSet::new()),
        }
    }

    pub fn singleton(i: usize) -> Self {
        SupportDescriptor::Finite([i].into_iter().collect())
    }

    /// Cofinite descriptors only over ℕ; finite-universe indices in range.
    pub fn check_canonical(&self, universe: Universe) -> Result<()> {
        match (self, universe) {
            (SupportDescriptor::Cofinite(_), Universe::Finite(n)) => Err(Error::NonCanonical(
                format!("cofinite descriptor {self} over a family with {n} classes"),
            )),
            (SupportDescriptor::Finite(s), Universe::Finite(n)) => {
                match s.iter().find(|&&i| i >= n) {
                    Some(i) => Err(Error::NonCanonical(format!("index {i} outside 0..{n}"))),
                    None => Ok(()),
                }
            }
            (_, Universe::Naturals) => Ok(()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SupportDescriptor::Finite(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SupportDescriptor::Finite(s) if s.is_empty())
    }

    pub fn contains(&self, i: usize) -> bool {
        match self {
            SupportDescriptor::Finite(s) => s.contains(&i),
            SupportDescriptor::Cofinite(e) => !e.contains(&i),
        }
    }

    /// The finite set or the excluded set.
    pub fn exceptional(&self) -> &BTreeSet<usize> {
        match self {
            SupportDescriptor::Finite(s) | SupportDescriptor::Cofinite(s) => s,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use SupportDescriptor::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a | b),
            (Finite(a), Cofinite(e)) | (Cofinite(e), Finite(a)) => Cofinite(e - a),
            (Cofinite(a), Cofinite(b)) => Cofinite(a & b),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        use SupportDescriptor::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a & b),
            (Finite(a), Cofinite(e)) | (Cofinite(e), Finite(a)) => Finite(a - e),
            (Cofinite(a), Cofinite(b)) => Cofinite(a | b),
        }
    }

    pub fn complement(&self, universe: Universe) -> Self {
        use SupportDescriptor::*;
        match (self, universe) {
            (Finite(s), Universe::Finite(n)) => Finite((0..n).filter(|i| !s.contains(i)).collect()),
            (Finite(s), Universe::Naturals) => Cofinite(s.clone()),
            (Cofinite(e), _) => Finite(e.clone()),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        use SupportDescriptor::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.is_subset(b),
            (Finite(a), Cofinite(e)) => a.is_disjoint(e),
            (Cofinite(a), Cofinite(b)) => b.is_subset(a),
            (Cofinite(_), Finite(_)) => false,
        }
    }

    /// Members below `bound`, for comparing against a truncation.
    pub fn below(&self, bound: usize) -> BTreeSet<usize> {
        (0..bound).filter(|&i| self.contains(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn descriptor() -> impl Strategy<Value = SupportDescriptor> {
        (
            any::<bool>(),
            proptest::collection::btree_set(0usize..12, 0..5),
        )
            .prop_map(|(fin, s)| {
                if fin {
                    SupportDescriptor::Finite(s)
                } else {
                    SupportDescriptor::Cofinite(s)
                }
            })
    }

    /// Membership in the window `0..16`, which exceeds every index used here.
    fn window(d: &SupportDescriptor) -> (BTreeSet<usize>, bool) {
        (d.below(16), !d.is_finite())
    }

    proptest! {
        #[test]
        fn operations_match_pointwise_sets(a in descriptor(), b in descriptor()) {
            let (wa, ia) = window(&a);
            let (wb, ib) = window(&b);
            prop_assert_eq!(window(&a.union(&b)), (&wa | &wb, ia || ib));
            prop_assert_eq!(window(&a.intersection(&b)), (&wa & &wb, ia && ib));
            let c = a.complement(Universe::Naturals);
            prop_assert_eq!(window(&c).0, (0..16).filter(|i| !wa.contains(i)).collect::<BTreeSet<_>>());
            let subset = wa.is_subset(&wb) && (!ia || ib);
            prop_assert_eq!(a.is_subset(&b), subset);
        }
    }

    #[test]
    fn cofinite_over_finite_universe_is_rejected() {
        let r = SupportDescriptor::cofinite(Universe::Finite(3), BTreeSet::new());
        assert!(matches!(r, Err(Error::NonCanonical(_))));
        assert!(SupportDescriptor::finite(Universe::Finite(3), [3].into_iter().collect()).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(
            SupportDescriptor::Cofinite([2].into_iter().collect()).to_string(),
            "N\\{2}"
        );
        assert_eq!(SupportDescriptor::empty().to_string(), "{}");
    }
}
