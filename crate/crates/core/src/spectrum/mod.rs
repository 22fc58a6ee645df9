//! Prime Serre ideals and their Zariski topology: the support lattice and
//! discrete spectrum of an essentially finite family, and the symbolic
//! one-point compactification `ℕ*` for N-stable kinds.

mod nstar;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use nstar::{
    decide_closed, intersection_witness, replay_prime_uniqueness, replay_test_set, spc_n_stable,
    union_witness, verify_p_infinity, verify_witness, zariski_closed, ClosedDecision, ClosedSet,
    ClosureWitness, PInfinityReport, PointSet, ReplayOutcome,
};

use crate::error::{Error, Result};
use crate::exactla::Q;
use crate::family::{full_subfamily, ClassIdx, GroupFamily, NStableKind};
use crate::rep::{chi_from_outrep, dsum_all, e_g, tensor, unit, OutRep, Rep};
use crate::serre::{IdealSpec, SupportDescriptor};

/// Largest number of classes whose ideal lattice is enumerated.
pub const ENUMERATION_GUARD: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum PrimePoint {
    /// Objects vanishing at the class (or level) with this index.
    Group(usize),
    /// Finitely supported objects; only over N-stable kinds.
    Infinity,
}

impl fmt::Display for PrimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimePoint::Group(i) => write!(f, "P_{i}"),
            PrimePoint::Infinity => write!(f, "P_inf"),
        }
    }
}

/// `P_G`: support everything except `G`.
pub fn group_prime(family: &Arc<GroupFamily>, g: ClassIdx) -> Result<IdealSpec> {
    if g >= family.num_classes() {
        return Err(Error::UnknownClass(format!("class index {g}")));
    }
    let mut support = family.all_classes();
    support.remove(&g);
    IdealSpec::from_support(family, &support)
}

/// Whether `X ⊗ Y ∈ P ⇒ X ∈ P or Y ∈ P` for all pairs drawn from `catalog`.
pub fn verify_prime_on_catalog(ideal: &IdealSpec, catalog: &[Rep]) -> Result<bool> {
    Ok(CatalogTable::new(catalog)?.prime_for(ideal))
}

/// Supports of catalog objects and of their pairwise tensors; membership
/// depends on support only, so each product is formed once.
struct CatalogTable {
    supports: Vec<BTreeSet<ClassIdx>>,
    products: Vec<Vec<BTreeSet<ClassIdx>>>,
}

impl CatalogTable {
    fn new(catalog: &[Rep]) -> Result<CatalogTable> {
        let products = catalog
            .iter()
            .enumerate()
            .map(|(i, x)| {
                catalog[..=i]
                    .iter()
                    .map(|y| Ok(tensor(x, y)?.support_set()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CatalogTable {
            supports: catalog.iter().map(Rep::support_set).collect(),
            products,
        })
    }

    fn product(&self, i: usize, j: usize) -> &BTreeSet<ClassIdx> {
        &self.products[i.max(j)][i.min(j)]
    }

    fn prime_for(&self, ideal: &IdealSpec) -> bool {
        let inside = |s: &BTreeSet<ClassIdx>| s.is_subset(ideal.support_set());
        let n = self.supports.len();
        ideal.is_proper()
            && (0..n).all(|i| {
                (0..=i).all(|j| {
                    !inside(self.product(i, j))
                        || inside(&self.supports[i])
                        || inside(&self.supports[j])
                })
            })
    }
}

/// Largest value of `e_G` kept in the catalog.
const CATALOG_DIM_LIMIT: usize = 12;

/// `χ_G` for every class, `e_G` for every class where it is small, and the unit.
pub fn standard_catalog(family: &Arc<GroupFamily>) -> Vec<Rep> {
    let n = family.num_classes();
    let mut catalog: Vec<Rep> = (0..n).map(|g| chi(family, g)).collect();
    catalog.extend(
        (0..n)
            .filter(|&g| (0..n).all(|h| family.homs(h, g).len() <= CATALOG_DIM_LIMIT))
            .map(|g| e_g(family, g)),
    );
    catalog.push(unit(family));
    catalog
}

fn chi(family: &Arc<GroupFamily>, g: ClassIdx) -> Rep {
    chi_from_outrep(&OutRep::trivial(family, g, 1))
}

/// How a support set fails or passes primality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeVerdict {
    NotProper,
    /// The support misses exactly this class.
    Prime {
        class: ClassIdx,
    },
    /// `χ_a ⊗ χ_b = 0` lies in the ideal while neither factor does.
    NotPrime {
        a: ClassIdx,
        b: ClassIdx,
    },
}

/// The Serre ideals of an essentially finite family, indexed by the bitmask
/// of their support.
#[derive(Clone, Debug)]
pub struct SerreLattice {
    family: Arc<GroupFamily>,
    chis: Vec<Rep>,
    /// `χ_a ⊗ χ_b = 0`, indexed by `[max][min]`.
    products_vanish: Vec<Vec<bool>>,
}

pub fn enumerate_serre_ideals(family: &Arc<GroupFamily>, guard: usize) -> Result<SerreLattice> {
    let n = family.num_classes();
    let limit = guard.min(ENUMERATION_GUARD);
    if n > limit {
        return Err(Error::GuardExceeded { size: n, limit });
    }
    let chis: Vec<Rep> = (0..n).map(|g| chi(family, g)).collect();
    let products_vanish = (0..n)
        .map(|a| {
            (0..a)
                .map(|b| Ok(tensor(&chis[a], &chis[b])?.is_zero()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SerreLattice {
        family: family.clone(),
        chis,
        products_vanish,
    })
}

impl SerreLattice {
    pub fn family(&self) -> &Arc<GroupFamily> {
        &self.family
    }

    pub fn len(&self) -> usize {
        1 << self.family.num_classes()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn full_mask(&self) -> u32 {
        (self.len() - 1) as u32
    }

    pub fn support(mask: u32) -> BTreeSet<ClassIdx> {
        (0..32).filter(|c| mask >> c & 1 == 1).collect()
    }

    pub fn mask_of(support: &BTreeSet<ClassIdx>) -> u32 {
        support.iter().fold(0, |m, &c| m | 1 << c)
    }

    pub fn ideal(&self, mask: u32) -> Result<IdealSpec> {
        if mask > self.full_mask() {
            return Err(Error::UnknownClass(format!("support mask {mask:#b}")));
        }
        let generators = Self::support(mask)
            .into_iter()
            .map(|g| {
                (
                    format!("chi:{}", self.family.label(g)),
                    self.chis[g].clone(),
                )
            })
            .collect();
        IdealSpec::generated_by(&self.family, generators)
    }

    pub fn meet(&self, a: u32, b: u32) -> u32 {
        a & b
    }

    pub fn join(&self, a: u32, b: u32) -> u32 {
        a | b
    }

    pub fn includes(&self, small: u32, large: u32) -> bool {
        small & !large == 0
    }

    /// Decided with the χ-witnesses, whose tensor products are computed.
    pub fn prime_verdict(&self, mask: u32) -> Result<PrimeVerdict> {
        let missing: Vec<ClassIdx> = (0..self.family.num_classes())
            .filter(|c| mask >> c & 1 == 0)
            .collect();
        match missing.as_slice() {
            [] => Ok(PrimeVerdict::NotProper),
            [g] => Ok(PrimeVerdict::Prime { class: *g }),
            [a, b, ..] => {
                if !self.products_vanish[*b][*a] {
                    return Err(Error::Internal(
                        "concentrated objects at distinct classes have a nonzero tensor".into(),
                    ));
                }
                Ok(PrimeVerdict::NotPrime { a: *a, b: *b })
            }
        }
    }

    /// Masks of the prime ideals, ascending.
    pub fn primes(&self) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for mask in 0..=self.full_mask() {
            if matches!(self.prime_verdict(mask)?, PrimeVerdict::Prime { .. }) {
                out.push(mask);
            }
        }
        Ok(out)
    }

    /// Ideal to support and back recovers every element. Above
    /// `FULL_ROUND_TRIP_CLASSES` classes the ideals are compared through the
    /// supports of their generators, which determine them.
    pub fn round_trips(&self) -> Result<bool> {
        let n = self.family.num_classes();
        if n > FULL_ROUND_TRIP_CLASSES {
            let supports: Vec<BTreeSet<ClassIdx>> =
                self.chis.iter().map(Rep::support_set).collect();
            return Ok((0..=self.full_mask()).all(|mask| {
                let union: BTreeSet<ClassIdx> = Self::support(mask)
                    .iter()
                    .flat_map(|&g| supports[g].iter().copied())
                    .collect();
                Self::mask_of(&union) == mask
            }));
        }
        for mask in 0..=self.full_mask() {
            let ideal = self.ideal(mask)?;
            let back = IdealSpec::from_support(&self.family, ideal.support_set())?;
            if Self::mask_of(ideal.support_set()) != mask || back != ideal {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

const FULL_ROUND_TRIP_CLASSES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum SpaceModel {
    Discrete { family: String, labels: Vec<String> },
    OnePointCompactification { kind: NStableKind },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub property: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(property: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            property: property.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// A computed prime spectrum with the checks run while building it.
#[derive(Clone, Debug)]
pub struct SpectrumSpace {
    pub model: SpaceModel,
    family: Option<Arc<GroupFamily>>,
    /// Every point of a discrete space; empty for `ℕ*`, whose points are symbolic.
    pub points: Vec<PrimePoint>,
    /// No point specializes to another: every point is closed.
    pub specialization_trivial: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub summary: String,
    pub model: SpaceModel,
    pub points: Vec<String>,
    pub closed_sets: String,
    pub specialization: String,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

impl SpectrumSpace {
    pub fn point_count(&self) -> Option<usize> {
        match self.model {
            SpaceModel::Discrete { .. } => Some(self.points.len()),
            SpaceModel::OnePointCompactification { .. } => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.model, SpaceModel::Discrete { .. })
    }

    pub fn summary(&self) -> String {
        match &self.model {
            SpaceModel::Discrete { .. } => {
                let n = self.points.len();
                format!("{n} point{}, discrete", if n == 1 { "" } else { "s" })
            }
            SpaceModel::OnePointCompactification { .. } => {
                "ℕ* (one-point compactification)".to_string()
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Decides closedness by building a family of objects whose common
    /// non-vanishing locus is the set, or refuting that one exists.
    pub fn is_closed(&self, set: &PointSet) -> Result<bool> {
        match &self.model {
            SpaceModel::Discrete { .. } => {
                let family = self
                    .family
                    .as_ref()
                    .expect("discrete spaces keep their family");
                if set.infinity {
                    return Err(Error::Unsupported(
                        "the infinity point exists only over N-stable kinds".into(),
                    ));
                }
                let SupportDescriptor::Finite(classes) = &set.groups else {
                    return Err(Error::NonCanonical(
                        "cofinite point set over a finite family".into(),
                    ));
                };
                if classes.iter().any(|&c| c >= family.num_classes()) {
                    return Err(Error::UnknownClass(format!("{:?}", set.groups)));
                }
                let witness = discrete_witness(family, classes)?;
                Ok(discrete_zariski(family, std::slice::from_ref(&witness)) == *classes)
            }
            SpaceModel::OnePointCompactification { .. } => Ok(match decide_closed(set) {
                ClosedDecision::Closed(w) => verify_witness(&w, set),
                ClosedDecision::NotClosed => false,
            }),
        }
    }

    pub fn report(&self) -> SpectrumReport {
        let (points, closed_sets) = match &self.model {
            SpaceModel::Discrete { labels, .. } => (
                self.points
                    .iter()
                    .map(|p| match p {
                        PrimePoint::Group(g) => format!("P_{}", labels[*g]),
                        PrimePoint::Infinity => p.to_string(),
                    })
                    .collect(),
                "every subset is closed".to_string(),
            ),
            SpaceModel::OnePointCompactification { .. } => (
                vec!["P_n for every level n".to_string(), "P_inf".to_string()],
                "finite sets of group primes, and every set containing P_inf".to_string(),
            ),
        };
        SpectrumReport {
            summary: self.summary(),
            model: self.model.clone(),
            points,
            closed_sets,
            specialization: if self.specialization_trivial {
                "trivial: every point is closed".to_string()
            } else {
                "nontrivial".to_string()
            },
            checks: self.checks.clone(),
            all_passed: self.all_passed(),
        }
    }
}

/// `Z(S)` over a finite family: classes where every object of `S` is nonzero.
pub fn discrete_zariski(family: &Arc<GroupFamily>, objects: &[Rep]) -> BTreeSet<ClassIdx> {
    objects.iter().fold(family.all_classes(), |acc, x| {
        acc.intersection(&x.support_set()).copied().collect()
    })
}

/// `⊕_{G ∈ classes} χ_G`, whose non-vanishing locus is exactly `classes`.
pub fn discrete_witness(family: &Arc<GroupFamily>, classes: &BTreeSet<ClassIdx>) -> Result<Rep> {
    let parts: Vec<Rep> = classes.iter().map(|&g| chi(family, g)).collect();
    Ok(dsum_all(family, &parts)?.sum)
}

/// The spectrum of an essentially finite family: one point per class, discrete.
pub fn spc(family: &Arc<GroupFamily>) -> Result<SpectrumSpace> {
    let lattice = enumerate_serre_ideals(family, ENUMERATION_GUARD)?;
    let n = family.num_classes();
    let mut checks = Vec::new();
    checks.push(Check::new(
        "ideals correspond to subsets of classes",
        lattice.round_trips()?,
        format!("{} ideals", lattice.len()),
    ));

    let primes = lattice.primes()?;
    let mut points = Vec::new();
    let mut all_group = true;
    for &mask in &primes {
        let PrimeVerdict::Prime { class } = lattice.prime_verdict(mask)? else {
            unreachable!("primes() keeps prime verdicts only");
        };
        all_group &= lattice.ideal(mask)? == group_prime(family, class)?;
        points.push(PrimePoint::Group(class));
    }
    checks.push(Check::new(
        "every prime is a group prime",
        all_group && primes.len() == n,
        format!("{} primes for {n} classes", primes.len()),
    ));
    points.sort();
    let distinct: BTreeSet<u32> = primes.iter().copied().collect();
    checks.push(Check::new(
        "classes map injectively to primes",
        distinct.len() == points.len(),
        "",
    ));

    let catalog = standard_catalog(family);
    let table = CatalogTable::new(&catalog)?;
    let mut prime_on_catalog = true;
    let mut e_outside = true;
    for g in 0..n {
        let p = group_prime(family, g)?;
        prime_on_catalog &= table.prime_for(&p);
        // `e_G` is nonzero exactly where a surjection onto `G` exists.
        let e_support: BTreeSet<ClassIdx> =
            (0..n).filter(|&h| family.has_surjection(h, g)).collect();
        e_outside &= !e_support.is_subset(p.support_set());
    }
    checks.push(Check::new(
        "group primes are prime on the standard catalog",
        prime_on_catalog,
        format!("{} objects", catalog.len()),
    ));
    checks.push(Check::new("e_G lies outside P_G", e_outside, ""));

    // Every subset is closed: singletons suffice once unions are realized by sums.
    let subsets: Vec<BTreeSet<ClassIdx>> = if n <= 10 {
        (0..1u32 << n).map(SerreLattice::support).collect()
    } else {
        (0..n).map(|g| [g].into_iter().collect()).collect()
    };
    let mut discrete = true;
    for s in &subsets {
        discrete &= discrete_zariski(family, &[discrete_witness(family, s)?]) == *s;
    }
    checks.push(Check::new(
        "every subset is a Zariski closed set",
        discrete,
        format!("{} subsets witnessed", subsets.len()),
    ));

    Ok(SpectrumSpace {
        model: SpaceModel::Discrete {
            family: family.name(),
            labels: (0..n).map(|c| family.label(c).to_string()).collect(),
        },
        family: Some(family.clone()),
        points,
        specialization_trivial: true,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub class: String,
    pub out_order: usize,
    /// Character of `e_G(G)` is `|Out G|` at the identity and zero elsewhere.
    pub e_value_is_regular: bool,
    /// Catalog members of `P_G` evaluate to zero at `G`.
    pub members_vanish: bool,
    pub primes_containing: Vec<String>,
    pub maximal: bool,
    /// Primes of the single-class family `{G}`.
    pub evaluated_spectrum_points: usize,
    pub categorical_identification: String,
}

impl QuotientReport {
    pub fn holds(&self) -> bool {
        self.e_value_is_regular
            && self.members_vanish
            && self.maximal
            && self.evaluated_spectrum_points == 1
    }
}

fn trace(m: &crate::exactla::RationalMatrix) -> Q {
    (0..m.rows()).map(|i| m.get(i, i).clone()).sum()
}

/// The quotient by `P_G` realized as evaluation at `G`.
pub fn quotient_by_group_prime(family: &Arc<GroupFamily>, g: ClassIdx) -> Result<QuotientReport> {
    let p = group_prime(family, g)?;
    let out = family.out_group(g).to_vec();
    let value = OutRep::from_rep(&e_g(family, g), g);
    let id = family.identity(g);
    let order = Q::from_integer(out.len().into());
    let e_value_is_regular = value.dim() == out.len()
        && out.iter().all(|&s| {
            let expected = if s == id {
                order.clone()
            } else {
                Q::from_integer(0.into())
            };
            trace(value.matrix(s)) == expected
        });

    let catalog = standard_catalog(family);
    let table = CatalogTable::new(&catalog)?;
    let mut members_vanish = true;
    for i in 0..catalog.len() {
        for j in 0..=i {
            let s = table.product(i, j);
            if s.is_subset(p.support_set()) {
                members_vanish &= !s.contains(&g);
            }
        }
    }

    let lattice = enumerate_serre_ideals(family, ENUMERATION_GUARD)?;
    let p_mask = SerreLattice::mask_of(p.support_set());
    let mut primes_containing = Vec::new();
    for mask in lattice.primes()? {
        if lattice.includes(p_mask, mask) {
            if let PrimeVerdict::Prime { class } = lattice.prime_verdict(mask)? {
                primes_containing.push(family.label(class).to_string());
            }
        }
    }
    let maximal = primes_containing == [family.label(g)];

    let (single, _) = full_subfamily(family, &[g].into_iter().collect(), family.spec().clone())?;
    let evaluated_spectrum_points = enumerate_serre_ideals(&single, 1)?.primes()?.len();

    Ok(QuotientReport {
        class: family.label(g).to_string(),
        out_order: out.len(),
        e_value_is_regular,
        members_vanish,
        primes_containing,
        maximal,
        evaluated_spectrum_points,
        categorical_identification: if out.len() == 1 {
            "evaluation lands in vector spaces".to_string()
        } else {
            "evaluation lands in Out(G)-representations; identification with vector spaces \
             holds at the level of spectra only"
                .to_string()
        },
    })
}
