use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::support::{SupportDescriptor, Universe};
use crate::error::{Error, Result};
use crate::family::{ClassIdx, GroupFamily};
use crate::rep::{
    check_eventually_torsion_free, chi_from_outrep, dsum, e_g, e_trivial, gamma_rep,
    level_indexing, tensor, unit, OutRep, Rep,
};

/// Largest level at which the regular `e_n` is materialised; `Out(G_n)` grows
/// too fast beyond it.
pub const MAX_REGULAR_E_LEVEL: usize = 3;

/// Objects over an N-stable family that have a closed-form support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "args", rename_all = "snake_case")]
pub enum NamedObject {
    Unit,
    Zero,
    /// `χ_{i,k}`.
    Chi(usize),
    Gamma(usize),
    /// `e_{G_n}` with the regular `Out` representation.
    E(usize),
    /// `e_{G_n,k}`.
    ETrivial(usize),
    Tensor(Box<NamedObject>, Box<NamedObject>),
    Sum(Box<NamedObject>, Box<NamedObject>),
}

impl fmt::Display for NamedObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedObject::Unit => write!(f, "1"),
            NamedObject::Zero => write!(f, "0"),
            NamedObject::Chi(i) => write!(f, "chi_{i}"),
            NamedObject::Gamma(i) => write!(f, "gamma_{i}"),
            NamedObject::E(n) => write!(f, "e_{n}"),
            NamedObject::ETrivial(n) => write!(f, "e_{n},k"),
            NamedObject::Tensor(a, b) => write!(f, "({a} * {b})"),
            NamedObject::Sum(a, b) => write!(f, "({a} + {b})"),
        }
    }
}

impl NamedObject {
    pub fn tensor(a: NamedObject, b: NamedObject) -> NamedObject {
        NamedObject::Tensor(Box::new(a), Box::new(b))
    }

    pub fn sum(a: NamedObject, b: NamedObject) -> NamedObject {
        NamedObject::Sum(Box::new(a), Box::new(b))
    }

    /// `⊗` of the list, `Unit` when empty.
    pub fn tensor_all(items: impl IntoIterator<Item = NamedObject>) -> NamedObject {
        items
            .into_iter()
            .reduce(NamedObject::tensor)
            .unwrap_or(NamedObject::Unit)
    }

    /// `⊕` of the list, `Zero` when empty.
    pub fn sum_all(items: impl IntoIterator<Item = NamedObject>) -> NamedObject {
        items
            .into_iter()
            .reduce(NamedObject::sum)
            .unwrap_or(NamedObject::Zero)
    }

    /// Support over ℕ.
    pub fn descriptor(&self) -> SupportDescriptor {
        match self {
            NamedObject::Unit => SupportDescriptor::full(Universe::Naturals),
            NamedObject::Zero => SupportDescriptor::empty(),
            NamedObject::Chi(i) => SupportDescriptor::singleton(*i),
            NamedObject::Gamma(i) => SupportDescriptor::Cofinite([*i].into_iter().collect()),
            NamedObject::E(n) | NamedObject::ETrivial(n) => {
                SupportDescriptor::Cofinite((0..*n).collect())
            }
            NamedObject::Tensor(a, b) => a.descriptor().intersection(&b.descriptor()),
            NamedObject::Sum(a, b) => a.descriptor().union(&b.descriptor()),
        }
    }

    /// Largest index mentioned.
    pub fn max_index(&self) -> usize {
        match self {
            NamedObject::Unit | NamedObject::Zero => 0,
            NamedObject::Chi(i)
            | NamedObject::Gamma(i)
            | NamedObject::E(i)
            | NamedObject::ETrivial(i) => *i,
            NamedObject::Tensor(a, b) | NamedObject::Sum(a, b) => a.max_index().max(b.max_index()),
        }
    }

    /// The object over a finite truncation of an N-stable family; levels past
    /// the window contribute nothing.
    pub fn materialize(&self, family: &Arc<GroupFamily>) -> Result<Rep> {
        let level = level_indexing(family)?;
        let class_at = |i: usize| -> Option<ClassIdx> { level.iter().position(|&l| l == i) };
        match self {
            NamedObject::Unit => Ok(unit(family)),
            NamedObject::Zero => Ok(Rep::zero(family)),
            NamedObject::Chi(i) => Ok(match class_at(*i) {
                Some(c) => chi_from_outrep(&OutRep::trivial(family, c, 1)),
                None => Rep::zero(family),
            }),
            NamedObject::Gamma(i) => match class_at(*i) {
                Some(_) => gamma_rep(family, *i),
                None => Ok(unit(family)),
            },
            NamedObject::E(n) => {
                if *n > MAX_REGULAR_E_LEVEL {
                    return Err(Error::Unsupported(format!(
                        "regular e_{n} is only materialised up to level {MAX_REGULAR_E_LEVEL}"
                    )));
                }
                Ok(class_at(*n).map_or_else(|| Rep::zero(family), |c| e_g(family, c)))
            }
            NamedObject::ETrivial(n) => match class_at(*n) {
                Some(c) => e_trivial(family, c),
                None => Ok(Rep::zero(family)),
            },
            NamedObject::Tensor(a, b) => tensor(&a.materialize(family)?, &b.materialize(family)?),
            NamedObject::Sum(a, b) => dsum(&a.materialize(family)?, &b.materialize(family)?),
        }
    }
}

/// Evidence that an object is eventually torsion-free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Attestation {
    /// A named object over a builtin N-stable family.
    Builtin,
    /// Checked on a truncation with top level `top`; claims hold within it.
    Window {
        top: usize,
    },
    Unattested,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicObject {
    pub name: String,
    pub descriptor: SupportDescriptor,
    pub universe: Universe,
    pub attestation: Attestation,
}

impl SymbolicObject {
    pub fn named(x: &NamedObject) -> SymbolicObject {
        SymbolicObject {
            name: x.to_string(),
            descriptor: x.descriptor(),
            universe: Universe::Naturals,
            attestation: Attestation::Builtin,
        }
    }

    /// Reads a support descriptor off an object over a truncation.
    ///
    /// Support reaching the top level is extrapolated to a cofinite set; the
    /// result is attested only when certified injectivity justifies that.
    pub fn from_window(name: &str, x: &Rep) -> Result<SymbolicObject> {
        let family = x.family();
        let level = level_indexing(family)?;
        let top = family.num_classes().saturating_sub(1);
        let levels: BTreeSet<usize> = x.support_set().into_iter().map(|c| level[c]).collect();
        let bound = check_eventually_torsion_free(x)?;
        let cofinite =
            || SupportDescriptor::Cofinite((0..top).filter(|l| !levels.contains(l)).collect());
        // Injectivity above `r` propagates a nonzero level strictly between
        // `r` and `top` to every later level; the top level alone proves nothing.
        let stable = levels.iter().any(|&n| n > bound.r() && n < top);
        let (descriptor, attestation) = match (bound.is_certified(), stable, levels.contains(&top))
        {
            (true, true, _) => (cofinite(), Attestation::Window { top }),
            (true, false, false) => (
                SupportDescriptor::Finite(levels.clone()),
                Attestation::Window { top },
            ),
            (_, _, true) => (cofinite(), Attestation::Unattested),
            (false, _, false) => (
                SupportDescriptor::Finite(levels.clone()),
                Attestation::Unattested,
            ),
        };
        Ok(SymbolicObject {
            name: name.to_string(),
            descriptor,
            universe: Universe::Naturals,
            attestation,
        })
    }
}

/// `X ∈ Serre⟨Y⟩` by support inclusion, valid when `Y` is eventually
/// torsion-free.
pub fn symbolic_member(x: &SymbolicObject, y: &SymbolicObject) -> Result<bool> {
    for o in [x, y] {
        if o.universe != Universe::Naturals {
            return Err(Error::NonCanonical(format!(
                "`{}` is not over an N-stable family",
                o.name
            )));
        }
        o.descriptor.check_canonical(o.universe)?;
    }
    if y.attestation == Attestation::Unattested {
        return Err(Error::NotAttested);
    }
    Ok(x.descriptor.is_subset(&y.descriptor))
}

/// An ideal over an N-stable family generated by symbolic objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicIdeal {
    pub generators: Vec<SymbolicObject>,
    pub support: SupportDescriptor,
}

impl SymbolicIdeal {
    pub fn generated_by(generators: Vec<SymbolicObject>) -> Result<SymbolicIdeal> {
        let mut support = SupportDescriptor::empty();
        for g in &generators {
            if g.attestation == Attestation::Unattested {
                return Err(Error::NotAttested);
            }
            g.descriptor.check_canonical(g.universe)?;
            support = support.union(&g.descriptor);
        }
        Ok(SymbolicIdeal {
            generators,
            support,
        })
    }

    pub fn contains(&self, x: &SymbolicObject) -> Result<bool> {
        x.descriptor.check_canonical(x.universe)?;
        Ok(x.descriptor.is_subset(&self.support))
    }
}
