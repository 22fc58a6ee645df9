use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{format_q, RationalMatrix, Subspace};
use crate::family::ClassIdx;
use crate::rep::{
    chi_from_outrep, chi_rep, cokernel, is_isomorphic, level_indexing, subrep_from_subspaces,
    OutRep, Rep, RepMorphism, SesReport, ShortExactSequence,
};

/// Which end of the sequence carries the concentrated piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `χ ↣ current ↠ next`.
    Sub,
    /// `next ↣ current ↠ χ`.
    Quotient,
}

#[derive(Clone, Debug)]
pub struct FiltrationStep {
    pub class: ClassIdx,
    pub side: Side,
    pub ses: ShortExactSequence,
}

impl FiltrationStep {
    pub fn current(&self) -> &Rep {
        self.ses.middle()
    }

    /// The concentrated piece.
    pub fn piece(&self) -> &Rep {
        match self.side {
            Side::Sub => self.ses.sub(),
            Side::Quotient => self.ses.quotient(),
        }
    }

    /// What the chain continues with.
    pub fn next(&self) -> &Rep {
        match self.side {
            Side::Sub => self.ses.quotient(),
            Side::Quotient => self.ses.sub(),
        }
    }
}

/// A chain of short exact sequences peeling concentrated pieces off `target`
/// until nothing is left.
#[derive(Clone, Debug)]
pub struct FiltrationCertificate {
    pub target: Rep,
    pub steps: Vec<FiltrationStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub class: String,
    pub side: Side,
    pub current_dims: Vec<usize>,
    pub piece_dims: Vec<usize>,
    pub next_dims: Vec<usize>,
    pub exactness: SesReport,
    pub piece_concentrated: bool,
    pub piece_matches_chi: bool,
    /// Components of the mono, then of the epi, per class, as `p/q` strings.
    pub mono: Vec<Vec<Vec<String>>>,
    pub epi: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub family: String,
    pub classes: Vec<String>,
    pub target_dims: Vec<usize>,
    pub steps: Vec<StepReport>,
    pub chain_links: bool,
    pub ends_at_zero: bool,
    pub verified: bool,
}

fn matrix_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(format_q).collect())
        .collect()
}

fn morphism_strings(f: &RepMorphism) -> Vec<Vec<Vec<String>>> {
    f.components().iter().map(matrix_strings).collect()
}

fn concentrated_at(x: &Rep, class: ClassIdx) -> bool {
    x.dims()
        .iter()
        .enumerate()
        .all(|(c, &d)| c == class || d == 0)
}

impl FiltrationCertificate {
    /// `(class, dim)` of each concentrated piece, in chain order.
    pub fn subquotients(&self) -> Vec<(ClassIdx, usize)> {
        self.steps
            .iter()
            .map(|s| (s.class, s.piece().dim(s.class)))
            .collect()
    }

    pub fn report(&self) -> Result<CertificateReport> {
        let family = self.target.family();
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let piece = s.piece();
                let concentrated = concentrated_at(piece, s.class);
                let matches = concentrated && {
                    let (chi, _) = chi_rep(&OutRep::from_rep(piece, s.class))?;
                    is_isomorphic(piece, &chi)?.is_some()
                };
                Ok(StepReport {
                    class: family.label(s.class).to_string(),
                    side: s.side,
                    current_dims: s.current().dims().to_vec(),
                    piece_dims: piece.dims().to_vec(),
                    next_dims: s.next().dims().to_vec(),
                    exactness: s.ses.verify(),
                    piece_concentrated: concentrated,
                    piece_matches_chi: matches,
                    mono: morphism_strings(&s.ses.mono),
                    epi: morphism_strings(&s.ses.epi),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut chain_links = self
            .steps
            .first()
            .is_none_or(|s| *s.current() == self.target);
        for pair in self.steps.windows(2) {
            chain_links &= pair[0].next() == pair[1].current();
        }
        let ends_at_zero = self
            .steps
            .last()
            .map_or(self.target.is_zero(), |s| s.next().is_zero());
        let verified = chain_links
            && ends_at_zero
            && steps
                .iter()
                .all(|s| s.exactness.is_exact() && s.piece_concentrated && s.piece_matches_chi);
        Ok(CertificateReport {
            family: family.name(),
            classes: (0..family.num_classes())
                .map(|c| family.label(c).to_string())
                .collect(),
            target_dims: self.target.dims().to_vec(),
            steps,
            chain_links,
            ends_at_zero,
            verified,
        })
    }

    /// Re-checks every sequence, every piece and the chain structure.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.report()?.verified)
    }
}

/// Strips `χ_{G, W(G)} ↣ W` for `G` in descending (order, label) order,
/// passing to the cokernel each time.
pub fn decompose_chi(x: &Rep) -> Result<FiltrationCertificate> {
    let family = x.family();
    let mut current = x.clone();
    let mut steps = Vec::new();
    for g in family.descending_order() {
        if current.dim(g) == 0 {
            continue;
        }
        // Every class strictly above `g` is already zero in `current`, so the
        // concentrated piece at `g` is a subobject.
        let piece = chi_from_outrep(&OutRep::from_rep(&current, g));
        let components = (0..family.num_classes())
            .map(|c| {
                if c == g {
                    RationalMatrix::identity(current.dim(g))
                } else {
                    RationalMatrix::zeros(current.dim(c), 0)
                }
            })
            .collect();
        let mono = RepMorphism::new(piece, current.clone(), components)
            .map_err(|e| Error::Internal(format!("concentrated piece is not a subobject: {e}")))?;
        let (next, epi) = cokernel(&mono)?;
        let ses = ShortExactSequence::new(mono, epi)?;
        if !ses.verify().is_exact() {
            return Err(Error::Internal("filtration step is not exact".into()));
        }
        steps.push(FiltrationStep {
            class: g,
            side: Side::Sub,
            ses,
        });
        current = next;
    }
    if !current.is_zero() {
        return Err(Error::Internal(
            "filtration did not terminate at zero".into(),
        ));
    }
    Ok(FiltrationCertificate {
        target: x.clone(),
        steps,
    })
}

/// `Γ_m X ↣ X ↠ χ_{m, X(m)}` for `X` vanishing below level `m`; `Γ_m X`
/// agrees with `X` above `m` and vanishes at and below it.
pub fn gamma_filtration(x: &Rep, m: usize) -> Result<ShortExactSequence> {
    let family = x.family();
    let level = level_indexing(family)?;
    if let Some(index) = (0..family.num_classes())
        .filter(|&c| level[c] < m && x.dim(c) > 0)
        .map(|c| level[c])
        .min()
    {
        return Err(Error::SupportBelow { index });
    }
    let spaces: Vec<Subspace> = (0..family.num_classes())
        .map(|c| {
            if level[c] > m {
                Subspace::full(x.dim(c))
            } else {
                Subspace::zero(x.dim(c))
            }
        })
        .collect();
    let (_, mono) = subrep_from_subspaces(x, &spaces)?;
    let (_, epi) = cokernel(&mono)?;
    let ses = ShortExactSequence::new(mono, epi)?;
    if !ses.verify().is_exact() {
        return Err(Error::Internal("Γ-filtration step is not exact".into()));
    }
    Ok(ses)
}

/// Iterates [`gamma_filtration`] upward from the lowest supported level.
pub fn gamma_certificate(x: &Rep) -> Result<FiltrationCertificate> {
    let family = x.family();
    let level = level_indexing(family)?;
    let mut by_level = vec![0; family.num_classes()];
    for (c, &l) in level.iter().enumerate() {
        by_level[l] = c;
    }
    let mut current = x.clone();
    let mut steps = Vec::new();
    for (m, &class) in by_level.iter().enumerate() {
        if current.is_zero() {
            break;
        }
        if current.dim(class) == 0 {
            continue;
        }
        let ses = gamma_filtration(&current, m)?;
        let next = ses.sub().clone();
        steps.push(FiltrationStep {
            class,
            side: Side::Quotient,
            ses,
        });
        current = next;
    }
    Ok(FiltrationCertificate {
        target: x.clone(),
        steps,
    })
}
