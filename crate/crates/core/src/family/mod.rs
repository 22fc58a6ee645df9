//! Finite families of groups as explicit category tables.
//!
//! A family stores its isomorphism classes sorted by `(order, label)`, and
//! for each ordered pair `(H, G)` the list of morphism classes `H ↠ G`.
//! Morphism classes carry global indices ([`HomIdx`]) so that objects over
//! the family can keep one transition matrix per class.

mod abelian;
mod snf;
mod spec;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

pub use abelian::{
    abelian_p_groups, enumerate_surjections, is_prime, is_surjective, subgroup_type, AbelianGroup,
    HomMatrix,
};
pub use snf::{integer_kernel, quotient_invariants, smith_normal_form, Snf};
pub use spec::{CustomHom, CustomObject, CustomTable, FamilySpec, NStableKind, Selection};

use crate::error::{Error, Result};

pub type ClassIdx = usize;
pub type HomIdx = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupClass {
    pub label: String,
    pub order: u64,
    pub group: Option<AbelianGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomClass {
    pub label: String,
    pub source: ClassIdx,
    pub target: ClassIdx,
    pub matrix: Option<HomMatrix>,
}

#[derive(Clone, Debug)]
enum Composition {
    /// `(outer, inner) -> outer ∘ inner`.
    Table(HashMap<(HomIdx, HomIdx), HomIdx>),
    /// Composite found by multiplying matrices and looking the result up.
    Matrix(HashMap<(ClassIdx, ClassIdx, HomMatrix), HomIdx>),
}

#[derive(Clone, Debug)]
pub struct GroupFamily {
    spec: FamilySpec,
    classes: Vec<GroupClass>,
    homs: Vec<HomClass>,
    hom_sets: Vec<Vec<Vec<HomIdx>>>,
    identities: Vec<HomIdx>,
    composition: Composition,
    class_by_label: HashMap<String, ClassIdx>,
    hom_by_label: HashMap<String, HomIdx>,
}

impl PartialEq for GroupFamily {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for GroupFamily {}

impl GroupFamily {
    pub fn from_spec(spec: &FamilySpec) -> Result<Arc<GroupFamily>> {
        match spec {
            FamilySpec::ElementaryAbelian { p, max_rank } => {
                let r = max_rank.ok_or_else(|| Error::NeedsTruncation(spec.describe()))?;
                check_prime(*p)?;
                let groups = (0..=r as usize)
                    .map(|k| AbelianGroup::elementary(*p, k))
                    .collect();
                Ok(Arc::new(Self::from_abelian_groups(spec.clone(), groups)))
            }
            FamilySpec::CyclicP { p, max_exponent } => {
                let e = max_exponent.ok_or_else(|| Error::NeedsTruncation(spec.describe()))?;
                check_prime(*p)?;
                let groups = (0..=e).map(|k| AbelianGroup::cyclic(p.pow(k))).collect();
                Ok(Arc::new(Self::from_abelian_groups(spec.clone(), groups)))
            }
            FamilySpec::AbelianP { p, order_bound } => {
                check_prime(*p)?;
                let groups = abelian_p_groups(*p, *order_bound);
                Ok(Arc::new(Self::from_abelian_groups(spec.clone(), groups)))
            }
            FamilySpec::Custom(table) => Ok(Arc::new(Self::from_table(table)?)),
            FamilySpec::Truncation { base, select } => {
                let base = Self::from_spec(base)?;
                let (sub, _) = truncate(&base, select)?;
                Ok(sub)
            }
        }
    }

    pub fn cyclic_p(p: u64, max_exponent: u32) -> Result<Arc<GroupFamily>> {
        Self::from_spec(&FamilySpec::CyclicP {
            p,
            max_exponent: Some(max_exponent),
        })
    }

    pub fn elementary_abelian(p: u64, max_rank: u32) -> Result<Arc<GroupFamily>> {
        Self::from_spec(&FamilySpec::ElementaryAbelian {
            p,
            max_rank: Some(max_rank),
        })
    }

    pub fn abelian_p(p: u64, order_bound: u64) -> Result<Arc<GroupFamily>> {
        Self::from_spec(&FamilySpec::AbelianP { p, order_bound })
    }

    pub fn custom(table: CustomTable) -> Result<Arc<GroupFamily>> {
        Self::from_spec(&FamilySpec::Custom(table))
    }

    fn from_abelian_groups(spec: FamilySpec, mut groups: Vec<AbelianGroup>) -> GroupFamily {
        groups.sort_by_key(|g| (g.order(), g.label()));
        groups.dedup();
        let classes: Vec<GroupClass> = groups
            .iter()
            .map(|g| GroupClass {
                label: g.label(),
                order: g.order(),
                group: Some(g.clone()),
            })
            .collect();
        let n = classes.len();
        let mut homs = Vec::new();
        let mut hom_sets = vec![vec![Vec::new(); n]; n];
        let mut lookup = HashMap::new();
        for (h, hg) in groups.iter().enumerate() {
            for (g, gg) in groups.iter().enumerate() {
                for m in enumerate_surjections(hg, gg) {
                    let idx = homs.len();
                    let label = format!(
                        "{}->{}:{}",
                        classes[h].label,
                        classes[g].label,
                        m.label_entries()
                    );
                    lookup.insert((h, g, m.clone()), idx);
                    hom_sets[h][g].push(idx);
                    homs.push(HomClass {
                        label,
                        source: h,
                        target: g,
                        matrix: Some(m),
                    });
                }
            }
        }
        let identities = groups
            .iter()
            .enumerate()
            .map(|(g, gg)| lookup[&(g, g, HomMatrix::identity(gg))])
            .collect();
        Self::assemble(
            spec,
            classes,
            homs,
            hom_sets,
            identities,
            Composition::Matrix(lookup),
        )
    }

    fn assemble(
        spec: FamilySpec,
        classes: Vec<GroupClass>,
        homs: Vec<HomClass>,
        hom_sets: Vec<Vec<Vec<HomIdx>>>,
        identities: Vec<HomIdx>,
        composition: Composition,
    ) -> GroupFamily {
        let class_by_label = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.label.clone(), i))
            .collect();
        let hom_by_label = homs
            .iter()
            .enumerate()
            .map(|(i, h)| (h.label.clone(), i))
            .collect();
        GroupFamily {
            spec,
            classes,
            homs,
            hom_sets,
            identities,
            composition,
            class_by_label,
            hom_by_label,
        }
    }

    fn from_table(table: &CustomTable) -> Result<GroupFamily> {
        let invalid = |reason: &str, witness: String| Error::InvalidTable {
            reason: reason.to_string(),
            witness,
        };
        let mut objects = table.objects.clone();
        objects.sort_by(|a, b| (a.order, &a.label).cmp(&(b.order, &b.label)));
        let mut classes = Vec::new();
        let mut class_by_label = HashMap::new();
        for o in &objects {
            if o.order == 0 {
                return Err(invalid("group order must be positive", o.label.clone()));
            }
            let group = match &o.group {
                Some(f) => {
                    let g = AbelianGroup::new(f.clone())?;
                    if g.order() != o.order {
                        return Err(invalid(
                            "declared order differs from payload",
                            o.label.clone(),
                        ));
                    }
                    Some(g)
                }
                None => None,
            };
            if class_by_label
                .insert(o.label.clone(), classes.len())
                .is_some()
            {
                return Err(invalid("duplicate object label", o.label.clone()));
            }
            classes.push(GroupClass {
                label: o.label.clone(),
                order: o.order,
                group,
            });
        }
        let n = classes.len();
        let class_of = |l: &str| {
            class_by_label
                .get(l)
                .copied()
                .ok_or_else(|| Error::UnknownClass(l.to_string()))
        };

        let mut homs = Vec::new();
        let mut hom_by_label = HashMap::new();
        let mut hom_sets = vec![vec![Vec::new(); n]; n];
        // Deterministic order within each hom-set: by label.
        let mut sorted_homs = table.homs.clone();
        sorted_homs.sort_by(|a, b| a.label.cmp(&b.label));
        for h in &sorted_homs {
            let (s, t) = (class_of(&h.source)?, class_of(&h.target)?);
            if classes[s].order < classes[t].order {
                return Err(invalid("surjection onto a larger group", h.label.clone()));
            }
            if hom_by_label.insert(h.label.clone(), homs.len()).is_some() {
                return Err(invalid("duplicate morphism label", h.label.clone()));
            }
            hom_sets[s][t].push(homs.len());
            homs.push(HomClass {
                label: h.label.clone(),
                source: s,
                target: t,
                matrix: None,
            });
        }
        let hom_of = |l: &str| {
            hom_by_label
                .get(l)
                .copied()
                .ok_or_else(|| Error::UnknownHom(l.to_string()))
        };

        let mut identities = vec![usize::MAX; n];
        for (obj, id) in &table.identity {
            let (c, h) = (class_of(obj)?, hom_of(id)?);
            if homs[h].source != c || homs[h].target != c {
                return Err(invalid("identity is not an endomorphism", id.clone()));
            }
            identities[c] = h;
        }
        if let Some(c) = identities.iter().position(|&h| h == usize::MAX) {
            return Err(invalid("missing identity", classes[c].label.clone()));
        }

        let mut table_map = HashMap::new();
        for [outer, inner, result] in &table.compose {
            let (a, b, c) = (hom_of(outer)?, hom_of(inner)?, hom_of(result)?);
            let witness = format!("{outer} ∘ {inner} = {result}");
            if homs[b].target != homs[a].source {
                return Err(invalid("composition of non-composable classes", witness));
            }
            if homs[c].source != homs[b].source || homs[c].target != homs[a].target {
                return Err(invalid("composite has the wrong endpoints", witness));
            }
            if let Some(prev) = table_map.insert((a, b), c) {
                if prev != c {
                    return Err(invalid("conflicting composition entries", witness));
                }
            }
        }
        // Identities may be left implicit in the table.
        for (h, hom) in homs.iter().enumerate() {
            table_map.entry((identities[hom.target], h)).or_insert(h);
            table_map.entry((h, identities[hom.source])).or_insert(h);
        }

        let family = Self::assemble(
            FamilySpec::Custom(table.clone()),
            classes,
            homs,
            hom_sets,
            identities,
            Composition::Table(table_map),
        );
        family.check_laws()?;
        Ok(family)
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn name(&self) -> String {
        self.spec.describe()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[GroupClass] {
        &self.classes
    }

    pub fn class(&self, c: ClassIdx) -> &GroupClass {
        &self.classes[c]
    }

    pub fn label(&self, c: ClassIdx) -> &str {
        &self.classes[c].label
    }

    pub fn order(&self, c: ClassIdx) -> u64 {
        self.classes[c].order
    }

    pub fn class_index(&self, label: &str) -> Result<ClassIdx> {
        self.class_by_label
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownClass(label.into()))
    }

    pub fn hom_index(&self, label: &str) -> Result<HomIdx> {
        self.hom_by_label
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownHom(label.into()))
    }

    pub fn all_classes(&self) -> BTreeSet<ClassIdx> {
        (0..self.num_classes()).collect()
    }

    pub fn num_homs(&self) -> usize {
        self.homs.len()
    }

    pub fn hom(&self, h: HomIdx) -> &HomClass {
        &self.homs[h]
    }

    pub fn homs_iter(&self) -> impl Iterator<Item = (HomIdx, &HomClass)> {
        self.homs.iter().enumerate()
    }

    /// Morphism classes `source ↠ target`, ascending by index.
    pub fn homs(&self, source: ClassIdx, target: ClassIdx) -> &[HomIdx] {
        &self.hom_sets[source][target]
    }

    pub fn has_surjection(&self, source: ClassIdx, target: ClassIdx) -> bool {
        !self.hom_sets[source][target].is_empty()
    }

    pub fn identity(&self, c: ClassIdx) -> HomIdx {
        self.identities[c]
    }

    /// `Hom(G, G)`, which plays the role of `Out(G)`.
    pub fn out_group(&self, c: ClassIdx) -> &[HomIdx] {
        &self.hom_sets[c][c]
    }

    /// `outer ∘ inner` for `inner: K ↠ H`, `outer: H ↠ G`.
    pub fn compose(&self, outer: HomIdx, inner: HomIdx) -> HomIdx {
        self.try_compose(outer, inner)
            .expect("composable morphism classes")
    }

    pub fn try_compose(&self, outer: HomIdx, inner: HomIdx) -> Option<HomIdx> {
        let (a, b) = (&self.homs[outer], &self.homs[inner]);
        if b.target != a.source {
            return None;
        }
        match &self.composition {
            Composition::Table(t) => t.get(&(outer, inner)).copied(),
            Composition::Matrix(lookup) => {
                let target = self.classes[a.target].group.as_ref()?;
                let m = a.matrix.as_ref()?.compose(b.matrix.as_ref()?, target);
                lookup.get(&(b.source, a.target, m)).copied()
            }
        }
    }

    /// Inverse of an element of `Hom(G, G)`.
    pub fn inverse(&self, sigma: HomIdx) -> Option<HomIdx> {
        let c = self.homs[sigma].source;
        let id = self.identities[c];
        self.out_group(c).iter().copied().find(|&tau| {
            self.try_compose(sigma, tau) == Some(id) && self.try_compose(tau, sigma) == Some(id)
        })
    }

    pub fn max_order(&self) -> u64 {
        self.classes.iter().map(|c| c.order).max().unwrap_or(1)
    }

    /// Exhaustive check of the category laws; returns the first violation.
    pub fn check_laws(&self) -> Result<()> {
        let invalid = |reason: &str, witness: String| Error::InvalidTable {
            reason: reason.to_string(),
            witness,
        };
        let n = self.num_classes();
        for (h, hom) in self.homs.iter().enumerate() {
            if self.classes[hom.source].order < self.classes[hom.target].order {
                return Err(invalid("surjection onto a larger group", hom.label.clone()));
            }
            if self.try_compose(self.identities[hom.target], h) != Some(h)
                || self.try_compose(h, self.identities[hom.source]) != Some(h)
            {
                return Err(invalid("identity law fails", hom.label.clone()));
            }
        }
        for k in 0..n {
            for hcls in 0..n {
                for &b in self.homs(k, hcls) {
                    for g in 0..n {
                        for &a in self.homs(hcls, g) {
                            let Some(ab) = self.try_compose(a, b) else {
                                return Err(invalid(
                                    "composition table is not total",
                                    format!("{} ∘ {}", self.homs[a].label, self.homs[b].label),
                                ));
                            };
                            for l in 0..n {
                                for &c in self.homs(l, k) {
                                    let left = self.try_compose(ab, c);
                                    let right = self
                                        .try_compose(b, c)
                                        .and_then(|bc| self.try_compose(a, bc));
                                    if left.is_none() || left != right {
                                        return Err(invalid(
                                            "associativity fails",
                                            format!(
                                                "({}, {}, {})",
                                                self.homs[a].label,
                                                self.homs[b].label,
                                                self.homs[c].label
                                            ),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for c in 0..n {
            for &s in self.out_group(c) {
                if self.inverse(s).is_none() {
                    return Err(invalid(
                        "endomorphism is not invertible",
                        self.homs[s].label.clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Classes in a descending linear extension of the epimorphism preorder,
    /// ties broken by label (largest first).
    pub fn descending_order(&self) -> Vec<ClassIdx> {
        let mut v: Vec<ClassIdx> = (0..self.num_classes()).collect();
        v.sort_by(|&a, &b| {
            (self.classes[b].order, &self.classes[b].label)
                .cmp(&(self.classes[a].order, &self.classes[a].label))
        });
        v
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidGroup(format!("{p} is not prime")))
    }
}

/// Classes that surject onto some member of `s`.
pub fn up_closure(family: &GroupFamily, s: &BTreeSet<ClassIdx>) -> Result<BTreeSet<ClassIdx>> {
    if let Some(&bad) = s.iter().find(|&&c| c >= family.num_classes()) {
        return Err(Error::UnknownClass(format!("#{bad}")));
    }
    Ok((0..family.num_classes())
        .filter(|&g| s.iter().any(|&h| family.has_surjection(g, h)))
        .collect())
}

pub fn up_closure_of_labels(family: &GroupFamily, labels: &[&str]) -> Result<BTreeSet<ClassIdx>> {
    let s = labels
        .iter()
        .map(|l| family.class_index(l))
        .collect::<Result<BTreeSet<_>>>()?;
    up_closure(family, &s)
}

pub fn is_up_closed(family: &GroupFamily, s: &BTreeSet<ClassIdx>) -> bool {
    (0..family.num_classes())
        .all(|h| s.contains(&h) || !s.iter().any(|&g| family.has_surjection(h, g)))
}

pub fn is_down_closed(family: &GroupFamily, s: &BTreeSet<ClassIdx>) -> bool {
    (0..family.num_classes())
        .all(|h| s.contains(&h) || !s.iter().any(|&g| family.has_surjection(g, h)))
}

/// An inclusion of a full subfamily.
#[derive(Clone, Debug)]
pub struct Inclusion {
    pub sub: Arc<GroupFamily>,
    pub ambient: Arc<GroupFamily>,
    /// Sub class index to ambient class index.
    pub object_map: Vec<ClassIdx>,
    /// Sub hom index to ambient hom index.
    pub hom_map: Vec<HomIdx>,
    pub is_up_closed: bool,
    pub is_down_closed: bool,
    class_back: HashMap<ClassIdx, ClassIdx>,
    hom_back: HashMap<HomIdx, HomIdx>,
}

impl Inclusion {
    pub fn sub_class(&self, ambient: ClassIdx) -> Option<ClassIdx> {
        self.class_back.get(&ambient).copied()
    }

    pub fn sub_hom(&self, ambient: HomIdx) -> Option<HomIdx> {
        self.hom_back.get(&ambient).copied()
    }

    pub fn image(&self) -> BTreeSet<ClassIdx> {
        self.object_map.iter().copied().collect()
    }

    /// Functoriality: identities and composites are preserved.
    pub fn is_functorial(&self) -> bool {
        let sub = &self.sub;
        let amb = &self.ambient;
        (0..sub.num_classes())
            .all(|c| self.hom_map[sub.identity(c)] == amb.identity(self.object_map[c]))
            && sub.homs_iter().all(|(b, hb)| {
                (0..sub.num_classes()).all(|g| {
                    sub.homs(hb.target, g).iter().all(|&a| {
                        self.hom_map[sub.compose(a, b)]
                            == amb.compose(self.hom_map[a], self.hom_map[b])
                    })
                })
            })
    }

    pub fn identity(family: &Arc<GroupFamily>) -> Inclusion {
        full_subfamily(family, &family.all_classes(), family.spec().clone())
            .expect("whole family")
            .1
    }
}

/// The full subcategory on `classes`, with its inclusion.
pub fn full_subfamily(
    family: &Arc<GroupFamily>,
    classes: &BTreeSet<ClassIdx>,
    spec: FamilySpec,
) -> Result<(Arc<GroupFamily>, Inclusion)> {
    if let Some(&bad) = classes.iter().find(|&&c| c >= family.num_classes()) {
        return Err(Error::UnknownClass(format!("#{bad}")));
    }
    let object_map: Vec<ClassIdx> = classes.iter().copied().collect();
    let class_back: HashMap<ClassIdx, ClassIdx> = object_map
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let n = object_map.len();
    let sub_classes: Vec<GroupClass> = object_map
        .iter()
        .map(|&c| family.class(c).clone())
        .collect();
    let mut homs = Vec::new();
    let mut hom_map = Vec::new();
    let mut hom_sets = vec![vec![Vec::new(); n]; n];
    for (hs, &ha) in object_map.iter().enumerate() {
        for (gs, &ga) in object_map.iter().enumerate() {
            for &h in family.homs(ha, ga) {
                let mut hc = family.hom(h).clone();
                hc.source = hs;
                hc.target = gs;
                hom_sets[hs][gs].push(homs.len());
                hom_map.push(h);
                homs.push(hc);
            }
        }
    }
    let hom_back: HashMap<HomIdx, HomIdx> =
        hom_map.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    let identities = object_map
        .iter()
        .map(|&c| hom_back[&family.identity(c)])
        .collect();
    let composition = match &family.composition {
        Composition::Table(t) => Composition::Table(
            t.iter()
                .filter_map(|(&(a, b), &c)| {
                    Some(((*hom_back.get(&a)?, *hom_back.get(&b)?), *hom_back.get(&c)?))
                })
                .collect(),
        ),
        Composition::Matrix(lookup) => Composition::Matrix(
            lookup
                .iter()
                .filter_map(|((s, t, m), &h)| {
                    Some((
                        (*class_back.get(s)?, *class_back.get(t)?, m.clone()),
                        *hom_back.get(&h)?,
                    ))
                })
                .collect(),
        ),
    };
    let sub = Arc::new(GroupFamily::assemble(
        spec,
        sub_classes,
        homs,
        hom_sets,
        identities,
        composition,
    ));
    let inclusion = Inclusion {
        sub: sub.clone(),
        ambient: family.clone(),
        object_map,
        hom_map,
        is_up_closed: is_up_closed(family, classes),
        is_down_closed: is_down_closed(family, classes),
        class_back,
        hom_back,
    };
    Ok((sub, inclusion))
}

/// Full subfamily selected by order or by class labels.
pub fn truncate(
    family: &Arc<GroupFamily>,
    select: &Selection,
) -> Result<(Arc<GroupFamily>, Inclusion)> {
    let classes: BTreeSet<ClassIdx> = match select {
        Selection::OrderAtMost(n) => (0..family.num_classes())
            .filter(|&c| family.order(c) <= *n)
            .collect(),
        Selection::OrderAbove(n) => (0..family.num_classes())
            .filter(|&c| family.order(c) > *n)
            .collect(),
        Selection::Classes(labels) => labels
            .iter()
            .map(|l| family.class_index(l))
            .collect::<Result<_>>()?,
    };
    let spec = FamilySpec::Truncation {
        base: Box::new(family.spec().clone()),
        select: select.clone(),
    };
    full_subfamily(family, &classes, spec)
}

/// Result of checking the total-order part of N-stability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NStableReport {
    pub total_order: bool,
    /// Classes sorted so that level `n` surjects onto every lower level.
    pub indexing: Vec<ClassIdx>,
    pub failures: Vec<String>,
}

pub fn check_n_stable(family: &GroupFamily) -> NStableReport {
    let mut indexing: Vec<ClassIdx> = (0..family.num_classes()).collect();
    indexing.sort_by_key(|&c| (family.order(c), family.label(c).to_string()));
    let mut failures = Vec::new();
    for (i, &a) in indexing.iter().enumerate() {
        for &b in &indexing[i + 1..] {
            let down = family.has_surjection(b, a);
            let up = family.has_surjection(a, b);
            if !down || up {
                failures.push(format!(
                    "{} vs {}: {} -> {} {}, {} -> {} {}",
                    family.label(a),
                    family.label(b),
                    family.label(b),
                    family.label(a),
                    if down { "exists" } else { "missing" },
                    family.label(a),
                    family.label(b),
                    if up { "exists" } else { "missing" },
                ));
            }
        }
    }
    NStableReport {
        total_order: failures.is_empty(),
        indexing,
        failures,
    }
}

/// Whether every span `G ↞ H ↠ K` inside `sub` has its image in `H -> G x K` inside `sub`.
pub fn is_widely_closed(sub: &BTreeSet<ClassIdx>, ambient: &GroupFamily) -> Result<bool> {
    for &c in sub {
        if c >= ambient.num_classes() {
            return Err(Error::UnknownClass(format!("#{c}")));
        }
        if ambient.class(c).group.is_none() {
            return Err(Error::Unsupported(format!(
                "class `{}` has no abelian payload",
                ambient.label(c)
            )));
        }
    }
    let members: Vec<&AbelianGroup> = sub
        .iter()
        .map(|&c| ambient.class(c).group.as_ref().unwrap())
        .collect();
    for &h in sub {
        let hg = ambient.class(h).group.as_ref().unwrap();
        let elements = hg.elements();
        // The image type depends only on the pair of kernels.
        let by_kernel = |g: ClassIdx| -> Result<Vec<&HomMatrix>> {
            let gg = ambient.class(g).group.as_ref().unwrap();
            let mut seen = BTreeSet::new();
            let mut reps = Vec::new();
            for &a in ambient.homs(h, g) {
                let m = ambient.hom(a).matrix.as_ref().ok_or_else(|| {
                    Error::Unsupported("morphism classes without matrices".into())
                })?;
                let kernel: Vec<usize> = (0..elements.len())
                    .filter(|&i| m.apply(&elements[i], gg).iter().all(|&x| x == 0))
                    .collect();
                if seen.insert(kernel) {
                    reps.push(m);
                }
            }
            Ok(reps)
        };
        for &g in sub {
            let alphas = by_kernel(g)?;
            for &k in sub.range(g..) {
                let betas = by_kernel(k)?;
                let gg = ambient.class(g).group.as_ref().unwrap();
                let kg = ambient.class(k).group.as_ref().unwrap();
                for ma in &alphas {
                    for mb in &betas {
                        if !members.contains(&&span_image(ma, mb, gg, kg)) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Isomorphism type of the image of `(alpha, beta): H -> G x K`.
fn span_image(
    alpha: &HomMatrix,
    beta: &HomMatrix,
    g: &AbelianGroup,
    k: &AbelianGroup,
) -> AbelianGroup {
    let mut factors = g.factors().to_vec();
    factors.extend_from_slice(k.factors());
    let gens: Vec<Vec<u64>> = (0..alpha.cols())
        .map(|j| {
            let mut v: Vec<u64> = (0..alpha.rows())
                .map(|i| alpha.get(i, j).rem_euclid(g.factors()[i] as i64) as u64)
                .collect();
            v.extend(
                (0..beta.rows()).map(|i| beta.get(i, j).rem_euclid(k.factors()[i] as i64) as u64),
            );
            v
        })
        .collect();
    subgroup_type_in_product(&factors, &gens)
}

/// Subgroup type inside `Z/f_1 x ... x Z/f_r` for an arbitrary list of cyclic orders.
fn subgroup_type_in_product(factors: &[u64], gens: &[Vec<u64>]) -> AbelianGroup {
    let n = factors.len();
    let m = gens.len();
    if m == 0 || n == 0 {
        return AbelianGroup::trivial();
    }
    let a: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row: Vec<i128> = gens.iter().map(|g| i128::from(g[i])).collect();
            row.extend((0..n).map(|k| if k == i { i128::from(factors[i]) } else { 0 }));
            row
        })
        .collect();
    let kernel = integer_kernel(&a, m + n);
    let relations: Vec<Vec<i128>> = kernel.into_iter().map(|v| v[..m].to_vec()).collect();
    let f = quotient_invariants(&relations, m).expect("finite subgroup");
    AbelianGroup::new(f).expect("invariant factors")
}

#[cfg(test)]
mod tests;
