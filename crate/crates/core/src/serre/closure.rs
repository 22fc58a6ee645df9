use serde::{Deserialize, Serialize};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactla::Subspace;
use crate::family::{is_up_closed, up_closure, GroupFamily};
use crate::rep::{
    cokernel, find_generic, quotient_by_subspaces, subrep_from_subspaces, tensor, Rep, RepMorphism,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureBudget {
    /// Rounds of the saturation loop.
    pub depth: usize,
    /// Cap on the working pool of reached objects and their tensors.
    pub max_pool: usize,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget {
            depth: 6,
            max_pool: 256,
        }
    }
}

/// Why a catalog entry was reached. Pool indices refer to [`ClosureResult::pool_names`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    Zero,
    /// A monomorphism into a pool object.
    SubOf {
        pool: usize,
    },
    /// An epimorphism from a pool object.
    QuotientOf {
        pool: usize,
    },
    /// A mono from a reached catalog entry whose cokernel is a sub or
    /// quotient of a pool object.
    Extension {
        sub: usize,
        cokernel_from_pool: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureResult {
    pub reasons: Vec<Option<Reason>>,
    pub pool_names: Vec<String>,
    /// The budget ran out before a fixpoint: `reached` is only a lower bound.
    pub exhausted: bool,
}

impl ClosureResult {
    pub fn reached(&self, i: usize) -> bool {
        self.reasons[i].is_some()
    }

    pub fn reached_indices(&self) -> Vec<usize> {
        (0..self.reasons.len())
            .filter(|&i| self.reached(i))
            .collect()
    }
}

fn fits_below(small: &Rep, big: &Rep) -> bool {
    small.dims().iter().zip(big.dims()).all(|(a, b)| a <= b)
}

fn is_sub(x: &Rep, y: &Rep) -> Result<bool> {
    if !fits_below(x, y) {
        return Ok(false);
    }
    Ok(find_generic(x, y, RepMorphism::is_mono)?.is_some())
}

fn is_quotient(y: &Rep, x: &Rep) -> Result<bool> {
    if !fits_below(x, y) {
        return Ok(false);
    }
    Ok(find_generic(y, x, RepMorphism::is_epi)?.is_some())
}

/// Every up-closed class set for small families; upward closures of single
/// classes otherwise.
fn up_closed_sets(family: &GroupFamily) -> Vec<BTreeSet<usize>> {
    let n = family.num_classes();
    if n <= 10 {
        (0u32..1 << n)
            .map(|mask| {
                (0..n)
                    .filter(|&c| mask >> c & 1 == 1)
                    .collect::<BTreeSet<_>>()
            })
            .filter(|s| !s.is_empty() && s.len() < n && is_up_closed(family, s))
            .collect()
    } else {
        (0..n)
            .filter_map(|c| up_closure(family, &[c].into_iter().collect()).ok())
            .collect()
    }
}

/// `X` itself, its subobjects living on up-closed class sets (closed under
/// every transition, since transitions only go upward) and the matching quotients.
fn with_truncations(x: &Rep, sets: &[BTreeSet<usize>]) -> Result<Vec<(String, Rep)>> {
    let mut out = Vec::new();
    for s in sets {
        let spaces: Vec<Subspace> = (0..x.dims().len())
            .map(|c| {
                if s.contains(&c) {
                    Subspace::full(x.dim(c))
                } else {
                    Subspace::zero(x.dim(c))
                }
            })
            .collect();
        let labels: Vec<&str> = s.iter().map(|&c| x.family().label(c)).collect();
        out.push((
            format!("restricted to {{{}}}", labels.join(",")),
            subrep_from_subspaces(x, &spaces)?.0,
        ));
        out.push((
            format!("modulo {{{}}}", labels.join(",")),
            quotient_by_subspaces(x, &spaces)?.0,
        ));
    }
    Ok(out)
}

/// A pool index `w` with `x` a sub or quotient of `pool[w]`.
fn derivable(x: &Rep, pool: &[(String, Rep)]) -> Result<Option<(usize, bool)>> {
    for (w, (_, p)) in pool.iter().enumerate() {
        if is_sub(x, p)? {
            return Ok(Some((w, true)));
        }
        if is_quotient(p, x)? {
            return Ok(Some((w, false)));
        }
    }
    Ok(None)
}

/// Catalog entries reachable from `generators` through subobjects,
/// quotients, extensions and tensoring with `tensor_pool`.
///
/// Every reached entry carries a [`Reason`] backed by a verified morphism,
/// so the result is sound; it is complete only relative to the catalog and
/// the generic morphism search.
pub fn brute_force_closure(
    generators: &[Rep],
    catalog: &[Rep],
    tensor_pool: &[Rep],
    budget: ClosureBudget,
) -> Result<ClosureResult> {
    let family = match generators.first().or(catalog.first()) {
        Some(x) => x.family().clone(),
        None => {
            return Ok(ClosureResult {
                reasons: Vec::new(),
                pool_names: Vec::new(),
                exhausted: false,
            })
        }
    };
    if generators
        .iter()
        .chain(catalog)
        .chain(tensor_pool)
        .any(|x| **x.family() != *family)
    {
        return Err(Error::FamilyMismatch);
    }
    let mut pool: Vec<(String, Rep)> = Vec::new();
    let mut exhausted = false;
    let sets = up_closed_sets(&family);
    let push =
        |pool: &mut Vec<(String, Rep)>, exhausted: &mut bool, name: String, x: Rep| -> Result<()> {
            let derived = with_truncations(&x, &sets)?;
            for (n, y) in std::iter::once((name.clone(), x))
                .chain(derived.into_iter().map(|(d, y)| (format!("{name} {d}"), y)))
            {
                if y.is_zero() || pool.iter().any(|(_, p)| *p == y) {
                    continue;
                }
                if pool.len() >= budget.max_pool {
                    *exhausted = true;
                    return Ok(());
                }
                pool.push((n, y));
            }
            Ok(())
        };
    for (i, g) in generators.iter().enumerate() {
        push(
            &mut pool,
            &mut exhausted,
            format!("generator {i}"),
            g.clone(),
        )?;
        for (j, t) in tensor_pool.iter().enumerate() {
            push(
                &mut pool,
                &mut exhausted,
                format!("generator {i} ⊗ pool {j}"),
                tensor(g, t)?,
            )?;
        }
    }
    let mut reasons: Vec<Option<Reason>> = vec![None; catalog.len()];
    let mut converged = false;
    for _ in 0..budget.depth {
        let mut changed = false;
        for (i, c) in catalog.iter().enumerate() {
            if reasons[i].is_some() {
                continue;
            }
            let reason = if c.is_zero() {
                Some(Reason::Zero)
            } else if let Some((w, sub)) = derivable(c, &pool)? {
                Some(if sub {
                    Reason::SubOf { pool: w }
                } else {
                    Reason::QuotientOf { pool: w }
                })
            } else {
                let mut found = None;
                for (j, r) in catalog.iter().enumerate() {
                    if reasons[j].is_none() || r.is_zero() || !fits_below(r, c) {
                        continue;
                    }
                    let Some(mono) = find_generic(r, c, RepMorphism::is_mono)? else {
                        continue;
                    };
                    let (q, _) = cokernel(&mono)?;
                    if let Some((w, _)) = derivable(&q, &pool)? {
                        found = Some(Reason::Extension {
                            sub: j,
                            cokernel_from_pool: w,
                        });
                        break;
                    }
                }
                found
            };
            if let Some(reason) = reason {
                reasons[i] = Some(reason);
                changed = true;
                push(&mut pool, &mut exhausted, format!("catalog {i}"), c.clone())?;
                for (j, t) in tensor_pool.iter().enumerate() {
                    push(
                        &mut pool,
                        &mut exhausted,
                        format!("catalog {i} ⊗ pool {j}"),
                        tensor(c, t)?,
                    )?;
                }
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    Ok(ClosureResult {
        reasons,
        pool_names: pool.into_iter().map(|(n, _)| n).collect(),
        exhausted: exhausted || !converged,
    })
}
