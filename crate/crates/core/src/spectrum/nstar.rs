use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Check, PrimePoint, SpaceModel, SpectrumSpace};
use crate::error::{Error, Result};
use crate::family::{FamilySpec, GroupFamily, NStableKind};
use crate::serre::{gamma_certificate, NamedObject, SupportDescriptor, Universe};

/// A set of points of `ℕ*` with a finitely describable group-prime part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointSet {
    pub groups: SupportDescriptor,
    pub infinity: bool,
}

impl PointSet {
    pub fn new(groups: SupportDescriptor, infinity: bool) -> PointSet {
        PointSet { groups, infinity }
    }

    pub fn empty() -> PointSet {
        PointSet::new(SupportDescriptor::empty(), false)
    }

    pub fn everything() -> PointSet {
        PointSet::new(SupportDescriptor::full(Universe::Naturals), true)
    }

    pub fn contains(&self, p: PrimePoint) -> bool {
        match p {
            PrimePoint::Group(i) => self.groups.contains(i),
            PrimePoint::Infinity => self.infinity,
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet::new(
            self.groups.union(&other.groups),
            self.infinity || other.infinity,
        )
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet::new(
            self.groups.intersection(&other.groups),
            self.infinity && other.infinity,
        )
    }
}

/// Canonical closed sets of `ℕ*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "groups", rename_all = "snake_case")]
pub enum ClosedSet {
    /// Finitely many group primes.
    FinitePoints(BTreeSet<usize>),
    /// `P_inf` together with the described group primes.
    WithInfinity(SupportDescriptor),
}

impl ClosedSet {
    pub fn points(&self) -> PointSet {
        match self {
            ClosedSet::FinitePoints(s) => {
                PointSet::new(SupportDescriptor::Finite(s.clone()), false)
            }
            ClosedSet::WithInfinity(d) => PointSet::new(d.clone(), true),
        }
    }

    /// `None` when the set is not closed.
    pub fn from_points(set: &PointSet) -> Option<ClosedSet> {
        match (&set.groups, set.infinity) {
            (d, true) => Some(ClosedSet::WithInfinity(d.clone())),
            (SupportDescriptor::Finite(s), false) => Some(ClosedSet::FinitePoints(s.clone())),
            (SupportDescriptor::Cofinite(_), false) => None,
        }
    }

    pub fn union(&self, other: &ClosedSet) -> ClosedSet {
        ClosedSet::from_points(&self.points().union(&other.points())).expect("closed")
    }

    pub fn intersection(&self, other: &ClosedSet) -> ClosedSet {
        ClosedSet::from_points(&self.points().intersection(&other.points())).expect("closed")
    }
}

/// `Z(S)`: a named object avoids `P_n` iff `n` is in its support, and avoids
/// `P_inf` iff its support is cofinite.
pub fn zariski_closed(objects: &[NamedObject]) -> ClosedSet {
    let mut groups = SupportDescriptor::full(Universe::Naturals);
    let mut infinity = true;
    for x in objects {
        let d = x.descriptor();
        infinity &= !d.is_finite();
        groups = groups.intersection(&d);
    }
    ClosedSet::from_points(&PointSet::new(groups, infinity))
        .expect("a finitely supported member forces a finite locus")
}

/// `Z(S_1) ∪ Z(S_2) = Z({X ⊕ Y})` over pairs from the two families.
pub fn union_witness(a: &[NamedObject], b: &[NamedObject]) -> Vec<NamedObject> {
    a.iter()
        .flat_map(|x| {
            b.iter()
                .map(move |y| NamedObject::sum(x.clone(), y.clone()))
        })
        .collect()
}

/// `Z(S_1) ∩ Z(S_2) = Z(S_1 ∪ S_2)`.
pub fn intersection_witness(a: &[NamedObject], b: &[NamedObject]) -> Vec<NamedObject> {
    a.iter().chain(b).cloned().collect()
}

/// A family `S` of named objects with `Z(S)` equal to a given set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosureWitness {
    Objects {
        objects: Vec<NamedObject>,
    },
    /// The infinite family `⊗_{i ≤ m, i ∉ keep} γ_i` for `m ≥ start`; the
    /// loci shrink to `keep ∪ {P_inf}`. A finite `S` cannot do this, since a
    /// finite intersection of cofinite supports is cofinite.
    GammaTower {
        keep: BTreeSet<usize>,
        start: usize,
    },
}

impl ClosureWitness {
    /// The tower member at height `m`.
    pub fn tower_member(keep: &BTreeSet<usize>, m: usize) -> NamedObject {
        NamedObject::tensor_all(
            (0..=m)
                .filter(|i| !keep.contains(i))
                .map(NamedObject::Gamma),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedDecision {
    Closed(ClosureWitness),
    /// Infinitely many group primes without `P_inf`: any `S` whose locus
    /// misses `P_inf` has a finitely supported member, so its locus is finite.
    NotClosed,
}

pub fn decide_closed(set: &PointSet) -> ClosedDecision {
    match (&set.groups, set.infinity) {
        (SupportDescriptor::Finite(s), false) => ClosedDecision::Closed(ClosureWitness::Objects {
            objects: vec![NamedObject::sum_all(s.iter().map(|&i| NamedObject::Chi(i)))],
        }),
        (SupportDescriptor::Cofinite(e), true) => ClosedDecision::Closed(ClosureWitness::Objects {
            objects: vec![NamedObject::tensor_all(
                e.iter().map(|&i| NamedObject::Gamma(i)),
            )],
        }),
        (SupportDescriptor::Finite(s), true) => {
            ClosedDecision::Closed(ClosureWitness::GammaTower {
                keep: s.clone(),
                start: s.last().map_or(0, |&m| m + 1),
            })
        }
        (SupportDescriptor::Cofinite(_), false) => ClosedDecision::NotClosed,
    }
}

/// Tower members checked past `start`.
const TOWER_CHECK: usize = 16;

/// Recomputes `Z` of the witness and compares it with `set`.
pub fn verify_witness(w: &ClosureWitness, set: &PointSet) -> bool {
    match w {
        ClosureWitness::Objects { objects } => zariski_closed(objects).points() == *set,
        ClosureWitness::GammaTower { keep, start } => {
            if !set.infinity || set.groups != SupportDescriptor::Finite(keep.clone()) {
                return false;
            }
            // Each locus is `keep ∪ (m, ∞) ∪ {P_inf}`; below `start` they all agree
            // with `keep`, and every level `n ≥ start` drops out at height `n`.
            (*start..start + TOWER_CHECK).all(|m| {
                let z = zariski_closed(&[ClosureWitness::tower_member(keep, m)]).points();
                let expected: BTreeSet<usize> = (0..=m).filter(|i| !keep.contains(i)).collect();
                z == PointSet::new(SupportDescriptor::Cofinite(expected), true)
            })
        }
    }
}

/// Result of replaying the uniqueness argument on a support-determined ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReplayOutcome {
    NotProper,
    /// Equals `P_inf` on the test set.
    Infinity,
    /// Equals `P_i` on the test set.
    GroupPrime {
        index: usize,
    },
    /// `left ⊗ right` lies in the ideal while neither factor does.
    NotPrime {
        left: NamedObject,
        right: NamedObject,
    },
    /// The rule contradicts the ideal it was forced to be at this support.
    Inconsistent {
        descriptor: SupportDescriptor,
    },
}

/// Finite and cofinite descriptors whose exceptional set lies in `0..bound`
/// and has at most `max_exceptional` elements.
pub fn replay_test_set(bound: usize, max_exceptional: usize) -> Vec<SupportDescriptor> {
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
    for i in 0..bound {
        let grown: Vec<BTreeSet<usize>> = sets
            .iter()
            .filter(|s| s.len() < max_exceptional)
            .map(|s| {
                let mut t = s.clone();
                t.insert(i);
                t
            })
            .collect();
        sets.extend(grown);
    }
    sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    sets.iter()
        .map(|s| SupportDescriptor::Finite(s.clone()))
        .chain(sets.iter().map(|s| SupportDescriptor::Cofinite(s.clone())))
        .collect()
}

fn gamma_product(s: &BTreeSet<usize>) -> NamedObject {
    NamedObject::tensor_all(s.iter().map(|&i| NamedObject::Gamma(i)))
}

/// Replays the classification of primes over `ℕ*` on an ideal given by a
/// membership rule on supports.
///
/// A cofinite member with excluded set `E` puts `⊗_{i ∈ E} γ_i` in the
/// ideal; primality splits the product down to a single `γ_i`, after which
/// properness pins the ideal to `P_i`. With no cofinite member, the zero
/// products `γ_i ⊗ χ_i` force every `χ_i` in, giving `P_inf`.
pub fn replay_prime_uniqueness(
    member: &dyn Fn(&SupportDescriptor) -> bool,
    test_set: &[SupportDescriptor],
) -> ReplayOutcome {
    if member(&SupportDescriptor::full(Universe::Naturals)) {
        return ReplayOutcome::NotProper;
    }
    let bound = test_set
        .iter()
        .flat_map(|d| d.exceptional().iter().copied())
        .max()
        .map_or(1, |m| m + 1);

    let gammas: Vec<SupportDescriptor> = (0..bound)
        .map(|i| NamedObject::Gamma(i).descriptor())
        .collect();
    let cofinite_member = test_set
        .iter()
        .chain(&gammas)
        .find(|d| !d.is_finite() && member(d))
        .cloned();

    let Some(found) = cofinite_member else {
        for i in 0..bound {
            // 0 = γ_i ⊗ χ_i lies in the ideal and γ_i does not.
            if !member(&NamedObject::Chi(i).descriptor()) {
                return ReplayOutcome::NotPrime {
                    left: NamedObject::Gamma(i),
                    right: NamedObject::Chi(i),
                };
            }
        }
        return match test_set.iter().find(|d| member(d) != d.is_finite()) {
            Some(d) => ReplayOutcome::Inconsistent {
                descriptor: d.clone(),
            },
            None => ReplayOutcome::Infinity,
        };
    };

    let mut excluded = found.exceptional().clone();
    while excluded.len() > 1 {
        let half = excluded.len() / 2;
        let left: BTreeSet<usize> = excluded.iter().take(half).copied().collect();
        let right: BTreeSet<usize> = excluded.iter().skip(half).copied().collect();
        if member(&gamma_product(&left).descriptor()) {
            excluded = left;
        } else if member(&gamma_product(&right).descriptor()) {
            excluded = right;
        } else {
            return ReplayOutcome::NotPrime {
                left: gamma_product(&left),
                right: gamma_product(&right),
            };
        }
    }
    let index = *excluded
        .first()
        .expect("a proper ideal has no member with full support");
    if !member(&NamedObject::Gamma(index).descriptor()) {
        return ReplayOutcome::Inconsistent {
            descriptor: NamedObject::Gamma(index).descriptor(),
        };
    }
    match test_set.iter().find(|d| member(d) == d.contains(index)) {
        Some(d) => ReplayOutcome::Inconsistent {
            descriptor: d.clone(),
        },
        None => ReplayOutcome::GroupPrime { index },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PInfinityReport {
    pub kind: NStableKind,
    pub level: u32,
    /// Catalog pairs whose tensor has finite support.
    pub primality_pairs: usize,
    pub primality_holds: bool,
    /// Finitely supported members with a verified γ-filtration certificate.
    pub certified: Vec<(String, bool)>,
    /// Finitely supported members reaching past the truncation, left unchecked.
    pub skipped: Vec<String>,
    /// Cofinitely supported members, reported outside `P_inf`.
    pub excluded: Vec<String>,
    pub annihilation_levels: Vec<usize>,
    /// `γ_i ⊗ χ_i = 0` on the truncation and `γ_i ∉ P_inf` at every level checked.
    pub annihilation_holds: bool,
}

impl PInfinityReport {
    pub fn holds(&self) -> bool {
        self.primality_holds && self.annihilation_holds && self.certified.iter().all(|(_, ok)| *ok)
    }
}

/// Checks `P_inf` on a catalog of named objects over the truncation at `level`.
pub fn verify_p_infinity(
    kind: NStableKind,
    catalog: &[NamedObject],
    level: u32,
) -> Result<PInfinityReport> {
    let family = GroupFamily::from_spec(&kind.truncation(level))?;
    let top = level as usize;

    let mut primality_pairs = 0;
    let mut primality_holds = true;
    for x in catalog {
        for y in catalog {
            if NamedObject::tensor(x.clone(), y.clone())
                .descriptor()
                .is_finite()
            {
                primality_pairs += 1;
                primality_holds &= x.descriptor().is_finite() || y.descriptor().is_finite();
            }
        }
    }

    let mut certified = Vec::new();
    let mut skipped = Vec::new();
    let mut excluded = Vec::new();
    for x in catalog {
        let d = x.descriptor();
        if !d.is_finite() {
            excluded.push(x.to_string());
            continue;
        }
        if d.exceptional().iter().any(|&i| i >= top) || x.max_index() > top {
            skipped.push(x.to_string());
            continue;
        }
        let rep = match x.materialize(&family) {
            Ok(r) => r,
            Err(Error::Unsupported(_)) => {
                skipped.push(x.to_string());
                continue;
            }
            Err(e) => return Err(e),
        };
        let ok = rep.support_set() == d.below(top + 1) && gamma_certificate(&rep)?.verify()?;
        certified.push((x.to_string(), ok));
    }

    let mut annihilation_levels = Vec::new();
    let mut annihilation_holds = true;
    for i in 0..=top {
        let product = NamedObject::tensor(NamedObject::Gamma(i), NamedObject::Chi(i));
        annihilation_holds &= product.materialize(&family)?.is_zero()
            && product.descriptor().is_empty()
            && !NamedObject::Gamma(i).descriptor().is_finite();
        annihilation_levels.push(i);
    }

    Ok(PInfinityReport {
        kind,
        level,
        primality_pairs,
        primality_holds,
        certified,
        skipped,
        excluded,
        annihilation_levels,
        annihilation_holds,
    })
}

/// Largest truncation used for numeric checks of each kind; the
/// automorphism groups of elementary abelian groups grow too fast beyond it.
fn numeric_level(kind: NStableKind) -> u32 {
    match kind {
        NStableKind::CyclicP { .. } => 6,
        NStableKind::ElementaryAbelian { .. } => 3,
    }
}

/// Index bound for the closed-set checks run while building the space.
const CLOSED_CHECK_BOUND: usize = 12;

fn reference_closed(set: &PointSet) -> bool {
    set.infinity || set.groups.is_finite()
}

/// Sample point sets: exceptional sets of size at most two below `bound`.
fn sample_point_sets(bound: usize) -> Vec<PointSet> {
    replay_test_set(bound, 2)
        .into_iter()
        .flat_map(|d| [PointSet::new(d.clone(), false), PointSet::new(d, true)])
        .collect()
}

/// The symbolic spectrum `ℕ*` of an N-stable kind, with its checks.
pub fn spc_n_stable(spec: &FamilySpec) -> Result<SpectrumSpace> {
    let kind = spec.n_stable_kind().ok_or_else(|| {
        Error::NotNStable(format!(
            "{} is not a builtin N-stable kind",
            spec.describe()
        ))
    })?;
    let mut checks = Vec::new();

    let sets = sample_point_sets(CLOSED_CHECK_BOUND);
    let mut agree = true;
    for s in &sets {
        let decided = match decide_closed(s) {
            ClosedDecision::Closed(w) => verify_witness(&w, s),
            ClosedDecision::NotClosed => false,
        };
        agree &= decided == reference_closed(s);
    }
    checks.push(Check::new(
        "closed sets are finite sets of group primes or contain P_inf",
        agree,
        format!(
            "{} point sets with indices below {CLOSED_CHECK_BOUND}",
            sets.len()
        ),
    ));

    let closed: Vec<&PointSet> = sets.iter().filter(|s| reference_closed(s)).collect();
    let mut stable = true;
    for a in closed.iter().step_by(7) {
        for b in closed.iter().step_by(5) {
            let (ClosedDecision::Closed(wa), ClosedDecision::Closed(wb)) =
                (decide_closed(a), decide_closed(b))
            else {
                stable = false;
                continue;
            };
            stable &= match (&wa, &wb) {
                (
                    ClosureWitness::Objects { objects: x },
                    ClosureWitness::Objects { objects: y },
                ) => {
                    zariski_closed(&union_witness(x, y)).points() == a.union(b)
                        && zariski_closed(&intersection_witness(x, y)).points() == a.intersection(b)
                }
                _ => reference_closed(&a.union(b)) && reference_closed(&a.intersection(b)),
            };
        }
    }
    checks.push(Check::new(
        "finite unions and intersections of closed sets are closed",
        stable,
        "unions through pairwise sums, intersections through concatenation",
    ));

    let test_set = replay_test_set(6, 3);
    let mut replay_ok = true;
    for n in 0..6 {
        let p_n = |d: &SupportDescriptor| !d.contains(n);
        replay_ok &=
            replay_prime_uniqueness(&p_n, &test_set) == ReplayOutcome::GroupPrime { index: n };
    }
    let p_inf = |d: &SupportDescriptor| d.is_finite();
    replay_ok &= replay_prime_uniqueness(&p_inf, &test_set) == ReplayOutcome::Infinity;
    checks.push(Check::new(
        "proper primes other than P_inf are group primes",
        replay_ok,
        format!("replayed on {} support descriptors", test_set.len()),
    ));

    let level = numeric_level(kind);
    let catalog = vec![
        NamedObject::Chi(0),
        NamedObject::Chi(2),
        NamedObject::Gamma(1),
        NamedObject::Unit,
        NamedObject::sum(NamedObject::Chi(1), NamedObject::Chi(2)),
        NamedObject::tensor(NamedObject::E(1), NamedObject::Chi(2)),
        NamedObject::tensor(NamedObject::Gamma(1), NamedObject::Gamma(2)),
    ];
    let report = verify_p_infinity(kind, &catalog, level)?;
    checks.push(Check::new(
        "P_inf is a minimal prime generated by the concentrated objects",
        report.holds(),
        format!("truncation at level {level}"),
    ));

    Ok(SpectrumSpace {
        model: SpaceModel::OnePointCompactification { kind },
        family: None,
        points: Vec::new(),
        specialization_trivial: true,
        checks,
    })
}
