//! Finite-dimensional global representations over an essentially finite family.
//!
//! A [`Rep`] assigns a vector space `X(G)` to every class and, to every
//! morphism class `α: H ↠ G`, a matrix `X(α): X(G) -> X(H)` of shape
//! `dim X(H) x dim X(G)`. Contravariance reads `X(α ∘ β) = X(β) X(α)`.

mod io;
mod projective;
pub mod random;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use io::{read_rep, write_rep, RepFile};
pub use projective::{
    check_eventually_torsion_free, chi_from_outrep, chi_rep, counit, e_g, e_rep, e_trivial,
    epi_from_projectives, gamma_rep, level_indexing, TorsionFreeBound,
};

use crate::error::{Error, Result};
use crate::exactla::{q, RationalMatrix, Subspace, Q};
use crate::family::{ClassIdx, GroupFamily, HomIdx};
use crate::serre::{SupportDescriptor, Universe};

fn same_family(a: &Arc<GroupFamily>, b: &Arc<GroupFamily>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone)]
pub struct Rep {
    family: Arc<GroupFamily>,
    dims: Vec<usize>,
    /// Indexed by morphism class.
    transitions: Vec<RationalMatrix>,
}

impl PartialEq for Rep {
    fn eq(&self, other: &Self) -> bool {
        same_family(&self.family, &other.family)
            && self.dims == other.dims
            && self.transitions == other.transitions
    }
}

impl Eq for Rep {}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep[{}](", self.family.name())?;
        for (c, d) in self.dims.iter().enumerate() {
            if c > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", self.family.label(c), d)?;
        }
        write!(f, ")")
    }
}

/// A failed functor law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

impl Rep {
    /// Checks shapes only.
    pub fn from_parts(
        family: Arc<GroupFamily>,
        dims: Vec<usize>,
        transitions: Vec<RationalMatrix>,
    ) -> Result<Rep> {
        if dims.len() != family.num_classes() {
            return Err(Error::ShapeMismatch(format!(
                "{} dimensions for {} classes",
                dims.len(),
                family.num_classes()
            )));
        }
        if transitions.len() != family.num_homs() {
            return Err(Error::ShapeMismatch(format!(
                "{} transitions for {} morphism classes",
                transitions.len(),
                family.num_homs()
            )));
        }
        for (h, hom) in family.homs_iter() {
            let m = &transitions[h];
            if m.shape() != (dims[hom.source], dims[hom.target]) {
                return Err(Error::ShapeMismatch(format!(
                    "transition at `{}` is {}x{}, expected {}x{}",
                    hom.label,
                    m.rows(),
                    m.cols(),
                    dims[hom.source],
                    dims[hom.target]
                )));
            }
        }
        Ok(Rep {
            family,
            dims,
            transitions,
        })
    }

    /// Checks shapes and the functor laws.
    pub fn new(
        family: Arc<GroupFamily>,
        dims: Vec<usize>,
        transitions: Vec<RationalMatrix>,
    ) -> Result<Rep> {
        let rep = Self::from_parts(family, dims, transitions)?;
        match rep.validate().into_iter().next() {
            None => Ok(rep),
            Some(v) => Err(Error::InvalidRep(format!(
                "{} fails at {}",
                v.law, v.witness
            ))),
        }
    }

    pub fn from_fn(
        family: Arc<GroupFamily>,
        dims: Vec<usize>,
        mut f: impl FnMut(HomIdx) -> RationalMatrix,
    ) -> Result<Rep> {
        let transitions = (0..family.num_homs()).map(&mut f).collect();
        Self::from_parts(family, dims, transitions)
    }

    pub fn zero(family: &Arc<GroupFamily>) -> Rep {
        let dims = vec![0; family.num_classes()];
        Self::from_fn(family.clone(), dims, |_| RationalMatrix::zeros(0, 0)).expect("shapes")
    }

    pub fn family(&self) -> &Arc<GroupFamily> {
        &self.family
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, c: ClassIdx) -> usize {
        self.dims[c]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn transition(&self, h: HomIdx) -> &RationalMatrix {
        &self.transitions[h]
    }

    pub fn transitions(&self) -> &[RationalMatrix] {
        &self.transitions
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn support_set(&self) -> BTreeSet<ClassIdx> {
        (0..self.dims.len()).filter(|&c| self.dims[c] > 0).collect()
    }

    /// Every violated identity or composition law.
    pub fn validate(&self) -> Vec<Violation> {
        let f = &self.family;
        let mut out = Vec::new();
        for c in 0..f.num_classes() {
            let id = f.identity(c);
            if self.transitions[id] != RationalMatrix::identity(self.dims[c]) {
                out.push(Violation {
                    law: "identity".into(),
                    witness: f.hom(id).label.clone(),
                });
            }
        }
        let n = f.num_classes();
        for k in 0..n {
            for h in 0..n {
                for &beta in f.homs(k, h) {
                    let xb = &self.transitions[beta];
                    for g in 0..n {
                        for &alpha in f.homs(h, g) {
                            let composite = f.compose(alpha, beta);
                            let expected = xb.mul(&self.transitions[alpha]).expect("shapes");
                            if self.transitions[composite] != expected {
                                out.push(Violation {
                                    law: "composition".into(),
                                    witness: format!(
                                        "{} ∘ {}",
                                        f.hom(alpha).label,
                                        f.hom(beta).label
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The same object in new coordinates `x' = p_G x`; returns the isomorphism `X -> X'`.
    pub fn change_basis(&self, p: &[RationalMatrix]) -> Result<(Rep, RepMorphism)> {
        let inverses: Vec<RationalMatrix> = p
            .iter()
            .zip(&self.dims)
            .map(|(m, &d)| {
                if m.shape() != (d, d) {
                    return Err(Error::ShapeMismatch("basis change shape".into()));
                }
                m.inverse()
                    .ok_or_else(|| Error::ShapeMismatch("basis change is singular".into()))
            })
            .collect::<Result<_>>()?;
        let f = &self.family;
        let transitions = f
            .homs_iter()
            .map(|(h, hom)| {
                p[hom.source]
                    .mul(&self.transitions[h])?
                    .mul(&inverses[hom.target])
            })
            .collect::<Result<Vec<_>>>()?;
        let target = Rep::from_parts(f.clone(), self.dims.clone(), transitions)?;
        let iso = RepMorphism::new(self.clone(), target.clone(), p.to_vec())?;
        Ok((target, iso))
    }
}

/// A natural transformation, one matrix `f_G: X(G) -> Y(G)` per class.
#[derive(Clone, PartialEq, Eq)]
pub struct RepMorphism {
    source: Rep,
    target: Rep,
    components: Vec<RationalMatrix>,
}

impl fmt::Debug for RepMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepMorphism({:?} -> {:?})", self.source, self.target)
    }
}

impl RepMorphism {
    /// Checks shapes and naturality.
    pub fn new(source: Rep, target: Rep, components: Vec<RationalMatrix>) -> Result<RepMorphism> {
        let m = Self::unchecked(source, target, components)?;
        if let Some(h) = m.naturality_failure() {
            return Err(Error::NotNatural(m.source.family.hom(h).label.clone()));
        }
        Ok(m)
    }

    fn unchecked(source: Rep, target: Rep, components: Vec<RationalMatrix>) -> Result<RepMorphism> {
        if !same_family(&source.family, &target.family) {
            return Err(Error::FamilyMismatch);
        }
        if components.len() != source.dims.len() {
            return Err(Error::ShapeMismatch("one component per class".into()));
        }
        for (c, m) in components.iter().enumerate() {
            if m.shape() != (target.dims[c], source.dims[c]) {
                return Err(Error::ShapeMismatch(format!(
                    "component at `{}` is {}x{}, expected {}x{}",
                    source.family.label(c),
                    m.rows(),
                    m.cols(),
                    target.dims[c],
                    source.dims[c]
                )));
            }
        }
        Ok(RepMorphism {
            source,
            target,
            components,
        })
    }

    /// First morphism class where `Y(α) f_G = f_H X(α)` fails.
    pub fn naturality_failure(&self) -> Option<HomIdx> {
        self.source.family.homs_iter().map(|(h, _)| h).find(|&h| {
            let hom = self.source.family.hom(h);
            let left = self.target.transitions[h]
                .mul(&self.components[hom.target])
                .expect("shapes");
            let right = self.components[hom.source]
                .mul(&self.source.transitions[h])
                .expect("shapes");
            left != right
        })
    }

    pub fn identity(x: &Rep) -> RepMorphism {
        let components = x
            .dims
            .iter()
            .map(|&d| RationalMatrix::identity(d))
            .collect();
        RepMorphism {
            source: x.clone(),
            target: x.clone(),
            components,
        }
    }

    pub fn zero(x: &Rep, y: &Rep) -> Result<RepMorphism> {
        let components = x
            .dims
            .iter()
            .zip(&y.dims)
            .map(|(&a, &b)| RationalMatrix::zeros(b, a))
            .collect();
        Self::unchecked(x.clone(), y.clone(), components)
    }

    pub fn source(&self) -> &Rep {
        &self.source
    }

    pub fn target(&self) -> &Rep {
        &self.target
    }

    pub fn component(&self, c: ClassIdx) -> &RationalMatrix {
        &self.components[c]
    }

    pub fn components(&self) -> &[RationalMatrix] {
        &self.components
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &RepMorphism) -> Result<RepMorphism> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch("morphisms are not composable".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&first.components)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<_>>()?;
        Ok(RepMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    pub fn add(&self, other: &RepMorphism) -> Result<RepMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch(
                "morphisms have different endpoints".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    pub fn scale(&self, s: &Q) -> RepMorphism {
        let components = self.components.iter().map(|m| m.scale(s)).collect();
        RepMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(RationalMatrix::is_injective)
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(RationalMatrix::is_surjective)
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(RationalMatrix::is_invertible)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(RationalMatrix::is_zero)
    }

    pub fn inverse(&self) -> Option<RepMorphism> {
        let components = self
            .components
            .iter()
            .map(|m| m.inverse())
            .collect::<Option<_>>()?;
        Some(RepMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            components,
        })
    }
}

/// An action of `Hom(G, G)` on a vector space, written on the right:
/// `ρ(σ ∘ τ) = ρ(τ) ρ(σ)`, the convention shared with transitions.
#[derive(Clone, PartialEq, Eq)]
pub struct OutRep {
    family: Arc<GroupFamily>,
    class: ClassIdx,
    dim: usize,
    /// Parallel to `family.out_group(class)`.
    action: Vec<RationalMatrix>,
}

impl fmt::Debug for OutRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OutRep({}, dim {})",
            self.family.label(self.class),
            self.dim
        )
    }
}

impl OutRep {
    pub fn new(
        family: Arc<GroupFamily>,
        class: ClassIdx,
        dim: usize,
        action: Vec<RationalMatrix>,
    ) -> Result<OutRep> {
        let out = family.out_group(class).to_vec();
        if action.len() != out.len() {
            return Err(Error::InvalidOutRep(format!(
                "{} matrices for a group of order {}",
                action.len(),
                out.len()
            )));
        }
        if action.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::InvalidOutRep("matrix shape".into()));
        }
        let v = OutRep {
            family,
            class,
            dim,
            action,
        };
        let f = &v.family;
        if *v.matrix(f.identity(class)) != RationalMatrix::identity(dim) {
            return Err(Error::InvalidOutRep(
                "identity does not act trivially".into(),
            ));
        }
        for &s in &out {
            for &t in &out {
                let lhs = v.matrix(f.compose(s, t));
                let rhs = v.matrix(t).mul(v.matrix(s))?;
                if *lhs != rhs {
                    return Err(Error::InvalidOutRep(format!(
                        "not an action at ({}, {})",
                        f.hom(s).label,
                        f.hom(t).label
                    )));
                }
            }
        }
        Ok(v)
    }

    pub fn trivial(family: &Arc<GroupFamily>, class: ClassIdx, dim: usize) -> OutRep {
        let action = vec![RationalMatrix::identity(dim); family.out_group(class).len()];
        OutRep {
            family: family.clone(),
            class,
            dim,
            action,
        }
    }

    /// `k[Out(G)]` with basis `e_τ` and `e_τ · σ = e_{τ ∘ σ}`.
    pub fn regular(family: &Arc<GroupFamily>, class: ClassIdx) -> OutRep {
        let out = family.out_group(class);
        let n = out.len();
        let pos = |h: HomIdx| out.binary_search(&h).expect("endomorphism");
        let action = out
            .iter()
            .map(|&s| {
                let mut m = RationalMatrix::zeros(n, n);
                for (i, &t) in out.iter().enumerate() {
                    m.set(pos(family.compose(t, s)), i, Q::one());
                }
                m
            })
            .collect();
        OutRep {
            family: family.clone(),
            class,
            dim: n,
            action,
        }
    }

    /// `X(G)` with `ρ(σ) = X(σ)`.
    pub fn from_rep(x: &Rep, class: ClassIdx) -> OutRep {
        let action = x
            .family
            .out_group(class)
            .iter()
            .map(|&s| x.transitions[s].clone())
            .collect();
        OutRep {
            family: x.family.clone(),
            class,
            dim: x.dims[class],
            action,
        }
    }

    pub fn family(&self) -> &Arc<GroupFamily> {
        &self.family
    }

    pub fn class(&self) -> ClassIdx {
        self.class
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, sigma: HomIdx) -> &RationalMatrix {
        // Hom-sets are stored in ascending index order.
        let pos = self
            .family
            .out_group(self.class)
            .binary_search(&sigma)
            .expect("element of Out(G)");
        &self.action[pos]
    }

    pub fn is_trivial(&self) -> bool {
        let id = RationalMatrix::identity(self.dim);
        self.action.iter().all(|m| *m == id)
    }

    pub fn direct_sum(&self, other: &OutRep) -> Result<OutRep> {
        if self.class != other.class || !same_family(&self.family, &other.family) {
            return Err(Error::FamilyMismatch);
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Ok(OutRep {
            family: self.family.clone(),
            class: self.class,
            dim: self.dim + other.dim,
            action,
        })
    }

    /// `ρ'(σ) = p ρ(σ) p⁻¹`.
    pub fn conjugate(&self, p: &RationalMatrix) -> Result<OutRep> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::InvalidOutRep("singular change of basis".into()))?;
        let action = self
            .action
            .iter()
            .map(|m| p.mul(m)?.mul(&inv))
            .collect::<Result<Vec<_>>>()?;
        Ok(OutRep {
            family: self.family.clone(),
            class: self.class,
            dim: self.dim,
            action,
        })
    }
}

/// The constant object with value `k` and identity transitions.
pub fn unit(family: &Arc<GroupFamily>) -> Rep {
    let dims = vec![1; family.num_classes()];
    Rep::from_fn(family.clone(), dims, |_| RationalMatrix::identity(1)).expect("shapes")
}

/// Pointwise tensor product; coordinates `i * dim Y(G) + j`.
pub fn tensor(x: &Rep, y: &Rep) -> Result<Rep> {
    if !same_family(&x.family, &y.family) {
        return Err(Error::FamilyMismatch);
    }
    let dims = x.dims.iter().zip(&y.dims).map(|(a, b)| a * b).collect();
    let transitions = x
        .transitions
        .iter()
        .zip(&y.transitions)
        .map(|(a, b)| a.kron(b))
        .collect();
    Rep::from_parts(x.family.clone(), dims, transitions)
}

/// `f ⊗ g` as a morphism `X ⊗ X' -> Y ⊗ Y'`.
pub fn tensor_morphisms(f: &RepMorphism, g: &RepMorphism) -> Result<RepMorphism> {
    let source = tensor(&f.source, &g.source)?;
    let target = tensor(&f.target, &g.target)?;
    let components = f
        .components
        .iter()
        .zip(&g.components)
        .map(|(a, b)| a.kron(b))
        .collect();
    RepMorphism::unchecked(source, target, components)
}

pub fn dsum(x: &Rep, y: &Rep) -> Result<Rep> {
    if !same_family(&x.family, &y.family) {
        return Err(Error::FamilyMismatch);
    }
    let dims = x.dims.iter().zip(&y.dims).map(|(a, b)| a + b).collect();
    let transitions = x
        .transitions
        .iter()
        .zip(&y.transitions)
        .map(|(a, b)| a.direct_sum(b))
        .collect();
    Rep::from_parts(x.family.clone(), dims, transitions)
}

/// Direct sum of a list, with its injections and projections.
pub struct DirectSum {
    pub sum: Rep,
    pub injections: Vec<RepMorphism>,
    pub projections: Vec<RepMorphism>,
}

pub fn dsum_all(family: &Arc<GroupFamily>, parts: &[Rep]) -> Result<DirectSum> {
    let mut sum = Rep::zero(family);
    for p in parts {
        sum = dsum(&sum, p)?;
    }
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offsets = vec![0usize; family.num_classes()];
    for p in parts {
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        for (c, offset) in offsets.iter_mut().enumerate() {
            let mut i = RationalMatrix::zeros(sum.dims[c], p.dims[c]);
            i.paste(*offset, 0, &RationalMatrix::identity(p.dims[c]));
            proj.push(i.transpose());
            inj.push(i);
            *offset += p.dims[c];
        }
        injections.push(RepMorphism::unchecked(p.clone(), sum.clone(), inj)?);
        projections.push(RepMorphism::unchecked(sum.clone(), p.clone(), proj)?);
    }
    Ok(DirectSum {
        sum,
        injections,
        projections,
    })
}

/// The subobject with the given pointwise subspaces, which must be stable
/// under all transitions; returns it with its inclusion.
pub fn subrep_from_subspaces(x: &Rep, subspaces: &[Subspace]) -> Result<(Rep, RepMorphism)> {
    let f = &x.family;
    let incl: Vec<RationalMatrix> = subspaces.iter().map(Subspace::inclusion).collect();
    let dims: Vec<usize> = subspaces.iter().map(Subspace::dim).collect();
    let transitions = f
        .homs_iter()
        .map(|(h, hom)| {
            let image = x.transitions[h].mul(&incl[hom.target])?;
            subspaces[hom.source]
                .coordinates_of_columns(&image)
                .map_err(|_| {
                    Error::InvalidRep(format!("subspaces are not stable under `{}`", hom.label))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let sub = Rep::from_parts(f.clone(), dims, transitions)?;
    let mono = RepMorphism::unchecked(sub.clone(), x.clone(), incl)?;
    Ok((sub, mono))
}

/// The quotient by stable pointwise subspaces, with its projection.
pub fn quotient_by_subspaces(x: &Rep, subspaces: &[Subspace]) -> Result<(Rep, RepMorphism)> {
    let f = &x.family;
    let proj: Vec<RationalMatrix> = subspaces.iter().map(Subspace::quotient_map).collect();
    let sect: Vec<RationalMatrix> = subspaces.iter().map(Subspace::quotient_section).collect();
    let dims: Vec<usize> = proj.iter().map(RationalMatrix::rows).collect();
    let transitions = f
        .homs_iter()
        .map(|(h, hom)| {
            proj[hom.source]
                .mul(&x.transitions[h])?
                .mul(&sect[hom.target])
        })
        .collect::<Result<Vec<_>>>()?;
    let quotient = Rep::from_parts(f.clone(), dims, transitions)?;
    let epi = RepMorphism::new(x.clone(), quotient.clone(), proj)?;
    Ok((quotient, epi))
}

pub fn kernel(f: &RepMorphism) -> Result<(Rep, RepMorphism)> {
    let spaces: Vec<Subspace> = f.components.iter().map(RationalMatrix::kernel).collect();
    subrep_from_subspaces(&f.source, &spaces)
}

pub fn cokernel(f: &RepMorphism) -> Result<(Rep, RepMorphism)> {
    let spaces: Vec<Subspace> = f.components.iter().map(RationalMatrix::image).collect();
    quotient_by_subspaces(&f.target, &spaces)
}

/// `f = mono ∘ epi` through the image.
pub struct ImageFactorization {
    pub image: Rep,
    pub epi: RepMorphism,
    pub mono: RepMorphism,
}

pub fn image(f: &RepMorphism) -> Result<ImageFactorization> {
    let spaces: Vec<Subspace> = f.components.iter().map(RationalMatrix::image).collect();
    let (image, mono) = subrep_from_subspaces(&f.target, &spaces)?;
    let epi_components = spaces
        .iter()
        .zip(&f.components)
        .map(|(s, m)| s.coordinates_of_columns(m))
        .collect::<Result<Vec<_>>>()?;
    let epi = RepMorphism::unchecked(f.source.clone(), image.clone(), epi_components)?;
    Ok(ImageFactorization { image, epi, mono })
}

/// The smallest subobject containing the given elements.
pub fn subrep_generated(x: &Rep, elements: &[(ClassIdx, Vec<Q>)]) -> Result<(Rep, RepMorphism)> {
    let f = &x.family;
    let mut vectors: Vec<Vec<Vec<Q>>> = vec![Vec::new(); f.num_classes()];
    for (g, v) in elements {
        if *g >= f.num_classes() {
            return Err(Error::UnknownClass(format!("#{g}")));
        }
        if v.len() != x.dims[*g] {
            return Err(Error::ShapeMismatch(format!(
                "element of length {} at `{}` of dimension {}",
                v.len(),
                f.label(*g),
                x.dims[*g]
            )));
        }
        for (h, at_h) in vectors.iter_mut().enumerate() {
            for &alpha in f.homs(h, *g) {
                at_h.push(x.transitions[alpha].mul_vec(v)?);
            }
        }
    }
    let spaces: Vec<Subspace> = vectors
        .iter()
        .enumerate()
        .map(|(h, vs)| Subspace::span(x.dims[h], vs))
        .collect();
    subrep_from_subspaces(x, &spaces)
}

pub fn support(x: &Rep) -> SupportDescriptor {
    SupportDescriptor::finite(Universe::Finite(x.family.num_classes()), x.support_set())
        .expect("classes are in range")
}

/// A basis of the space of natural transformations `X -> Y`.
///
/// `budget` caps the number of naturality equations processed.
pub fn hom_space(x: &Rep, y: &Rep, budget: Option<usize>) -> Result<Vec<RepMorphism>> {
    if !same_family(&x.family, &y.family) {
        return Err(Error::FamilyMismatch);
    }
    let f = &x.family;
    let n = f.num_classes();
    let mut offsets = Vec::with_capacity(n);
    let mut unknowns = 0;
    for c in 0..n {
        offsets.push(unknowns);
        unknowns += x.dims[c] * y.dims[c];
    }
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let var = |c: ClassIdx, r: usize, col: usize| offsets[c] + r * x.dims[c] + col;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut processed = 0usize;
    let flush = |rows: &mut Vec<Vec<Q>>| {
        let m = RationalMatrix::from_rows(std::mem::take(rows)).expect("rectangular");
        let (r, pivots) = m.rref();
        *rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    };
    for (alpha, hom) in f.homs_iter() {
        let (h, g) = (hom.source, hom.target);
        if alpha == f.identity(g) {
            continue;
        }
        let ya = &y.transitions[alpha];
        let xa = &x.transitions[alpha];
        // (Y(α) f_G - f_H X(α))[r, c] = 0
        for r in 0..y.dims[h] {
            for c in 0..x.dims[g] {
                processed += 1;
                if budget.is_some_and(|b| processed > b) {
                    return Err(Error::BudgetExceeded(format!(
                        "hom_space stopped after {} naturality equations",
                        processed - 1
                    )));
                }
                let mut row = vec![Q::zero(); unknowns];
                for k in 0..y.dims[g] {
                    let a = ya.get(r, k);
                    if !a.is_zero() {
                        row[var(g, k, c)] += a;
                    }
                }
                for k in 0..x.dims[h] {
                    let b = xa.get(k, c);
                    if !b.is_zero() {
                        row[var(h, r, k)] -= b;
                    }
                }
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.len() > 2 * unknowns + 16 {
            flush(&mut rows);
        }
    }
    let system = if rows.is_empty() {
        RationalMatrix::zeros(0, unknowns)
    } else {
        RationalMatrix::from_rows(rows)?
    };
    let solutions = system.kernel();
    (0..solutions.dim())
        .map(|i| {
            let v = solutions.basis_vector(i);
            let components = (0..n)
                .map(|c| {
                    let data = v[offsets[c]..offsets[c] + x.dims[c] * y.dims[c]].to_vec();
                    RationalMatrix::from_vec(y.dims[c], x.dims[c], data)
                })
                .collect::<Result<Vec<_>>>()?;
            RepMorphism::unchecked(x.clone(), y.clone(), components)
        })
        .collect()
}

/// Seeded random linear combination of a basis; coefficients in `[-1000, 1000]`.
pub fn random_combination(basis: &[RepMorphism], rng: &mut impl Rng) -> Option<RepMorphism> {
    let mut it = basis.iter();
    let first = it.next()?;
    let mut acc = first.scale(&q(rng.gen_range(-1000..=1000)));
    for b in it {
        acc = acc
            .add(&b.scale(&q(rng.gen_range(-1000..=1000))))
            .expect("same endpoints");
    }
    Some(acc)
}

const GENERIC_TRIES: usize = 20;

/// Searches the morphism space for one satisfying `accept`, trying each basis
/// element and then seeded random combinations.
pub fn find_generic(
    x: &Rep,
    y: &Rep,
    accept: impl Fn(&RepMorphism) -> bool,
) -> Result<Option<RepMorphism>> {
    let basis = hom_space(x, y, None)?;
    if basis.is_empty() {
        let z = RepMorphism::zero(x, y)?;
        return Ok(accept(&z).then_some(z));
    }
    for b in &basis {
        if accept(b) {
            return Ok(Some(b.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..GENERIC_TRIES {
        let m = random_combination(&basis, &mut rng).expect("nonempty basis");
        if accept(&m) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// A verified isomorphism `X -> Y`, or `None`.
///
/// A `None` answer rests on a generic search: isomorphisms form a Zariski-open
/// subset of the morphism space, so random combinations find one when it exists
/// with overwhelming probability.
pub fn is_isomorphic(x: &Rep, y: &Rep) -> Result<Option<RepMorphism>> {
    if !same_family(&x.family, &y.family) {
        return Err(Error::FamilyMismatch);
    }
    if x.dims != y.dims {
        return Ok(None);
    }
    find_generic(x, y, RepMorphism::is_iso)
}

/// `sub ↣ middle ↠ quotient`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub mono: RepMorphism,
    pub epi: RepMorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SesReport {
    pub mono_injective: bool,
    pub epi_surjective: bool,
    pub composite_zero: bool,
    pub exact_in_middle: bool,
}

impl SesReport {
    pub fn is_exact(&self) -> bool {
        self.mono_injective && self.epi_surjective && self.composite_zero && self.exact_in_middle
    }
}

impl ShortExactSequence {
    pub fn new(mono: RepMorphism, epi: RepMorphism) -> Result<Self> {
        if mono.target != epi.source {
            return Err(Error::ShapeMismatch("sequence is not composable".into()));
        }
        Ok(ShortExactSequence { mono, epi })
    }

    pub fn sub(&self) -> &Rep {
        &self.mono.source
    }

    pub fn middle(&self) -> &Rep {
        &self.mono.target
    }

    pub fn quotient(&self) -> &Rep {
        &self.epi.target
    }

    /// Pointwise exactness at all three spots.
    pub fn verify(&self) -> SesReport {
        let composite_zero = self
            .epi
            .compose(&self.mono)
            .map(|c| c.is_zero())
            .unwrap_or(false);
        let exact_in_middle = (0..self.mono.components.len()).all(|c| {
            let m = &self.mono.components[c];
            let e = &self.epi.components[c];
            m.rank() == e.kernel().dim()
        });
        SesReport {
            mono_injective: self.mono.is_mono(),
            epi_surjective: self.epi.is_epi(),
            composite_zero,
            exact_in_middle,
        }
    }
}

#[cfg(test)]
mod tests;
