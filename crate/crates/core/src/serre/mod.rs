//! Serre tensor ideals: support-criterion membership, constructive
//! χ-filtration certificates, the enlarged ideals `Serre⁺_n`, the symbolic
//! finite/cofinite layer for N-stable families, and a brute-force closure
//! oracle used to cross-check the criterion.

mod certificate;
mod closure;
mod support;
mod symbolic;

use std::collections::BTreeSet;
use std::sync::Arc;

pub use certificate::{
    decompose_chi, gamma_certificate, gamma_filtration, CertificateReport, FiltrationCertificate,
    FiltrationStep, Side, StepReport,
};
pub use closure::{brute_force_closure, ClosureBudget, ClosureResult, Reason};
pub use support::{SupportDescriptor, Universe};
pub use symbolic::{symbolic_member, Attestation, NamedObject, SymbolicIdeal, SymbolicObject};

use crate::error::{Error, Result};
use crate::family::{up_closure, ClassIdx, GroupFamily};
use crate::rep::{chi_from_outrep, OutRep, Rep};

/// A Serre tensor ideal over an essentially finite family, stored as its
/// generators and the union of their supports.
#[derive(Clone, Debug)]
pub struct IdealSpec {
    family: Arc<GroupFamily>,
    generators: Vec<(String, Rep)>,
    support: BTreeSet<ClassIdx>,
}

impl IdealSpec {
    pub fn generated_by(
        family: &Arc<GroupFamily>,
        generators: Vec<(String, Rep)>,
    ) -> Result<IdealSpec> {
        let mut support = BTreeSet::new();
        for (_, g) in &generators {
            if **g.family() != **family {
                return Err(Error::FamilyMismatch);
            }
            support.extend(g.support_set());
        }
        Ok(IdealSpec {
            family: family.clone(),
            generators,
            support,
        })
    }

    /// The ideal with the given support, generated by `χ_{G,k}` for `G` in it.
    pub fn from_support(
        family: &Arc<GroupFamily>,
        support: &BTreeSet<ClassIdx>,
    ) -> Result<IdealSpec> {
        if let Some(&c) = support.iter().find(|&&c| c >= family.num_classes()) {
            return Err(Error::UnknownClass(format!("class index {c}")));
        }
        let generators = support
            .iter()
            .map(|&g| {
                let chi = chi_from_outrep(&OutRep::trivial(family, g, 1));
                (format!("chi:{}", family.label(g)), chi)
            })
            .collect();
        IdealSpec::generated_by(family, generators)
    }

    pub fn family(&self) -> &Arc<GroupFamily> {
        &self.family
    }

    pub fn generators(&self) -> &[(String, Rep)] {
        &self.generators
    }

    pub fn support_set(&self) -> &BTreeSet<ClassIdx> {
        &self.support
    }

    pub fn support(&self) -> SupportDescriptor {
        SupportDescriptor::Finite(self.support.clone())
    }

    pub fn is_proper(&self) -> bool {
        self.support.len() < self.family.num_classes()
    }

    pub fn support_labels(&self) -> Vec<String> {
        self.support
            .iter()
            .map(|&c| self.family.label(c).to_string())
            .collect()
    }
}

impl PartialEq for IdealSpec {
    /// Ideals are equal when their supports are: the support criterion makes
    /// supports a complete invariant over essentially finite families.
    fn eq(&self, other: &Self) -> bool {
        *self.family == *other.family && self.support == other.support
    }
}

pub fn member(x: &Rep, ideal: &IdealSpec) -> Result<bool> {
    if **x.family() != *ideal.family {
        return Err(Error::FamilyMismatch);
    }
    Ok(x.support_set().is_subset(&ideal.support))
}

/// Membership with a constructive witness: a verified χ-filtration of `X`
/// whose pieces all sit at classes in the ideal's support.
pub fn member_certified(x: &Rep, ideal: &IdealSpec) -> Result<Option<FiltrationCertificate>> {
    if !member(x, ideal)? {
        return Ok(None);
    }
    let cert = decompose_chi(x)?;
    if cert
        .subquotients()
        .iter()
        .any(|(c, _)| !ideal.support.contains(c))
    {
        return Err(Error::Internal(
            "filtration piece outside the ideal's support".into(),
        ));
    }
    Ok(Some(cert))
}

/// Support of the extra generators `e_G` for `G ∈ (↑supp Y)_{>n}`.
pub fn serre_plus_extra_support(y: &Rep, n: u64) -> Result<BTreeSet<ClassIdx>> {
    let family = y.family();
    let up = up_closure(family, &y.support_set())?;
    let large: BTreeSet<ClassIdx> = up.into_iter().filter(|&g| family.order(g) > n).collect();
    up_closure(family, &large)
}

/// Membership of `X` in `Serre⁺_n⟨Y⟩`, the ideal generated by `Y` together
/// with `e_G` for every `G` in the upward closure of `supp Y` of order above `n`.
pub fn serre_plus_member(x: &Rep, y: &Rep, n: u64) -> Result<bool> {
    if **x.family() != **y.family() {
        return Err(Error::FamilyMismatch);
    }
    let mut allowed = y.support_set();
    allowed.extend(serre_plus_extra_support(y, n)?);
    Ok(x.support_set().is_subset(&allowed))
}

#[cfg(test)]
mod tests;
