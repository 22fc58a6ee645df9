//! The representable objects `e_{G,V}`, the concentrated objects `χ_{G,V}`,
//! the level-gap objects `γ_i`, and the counit presentation by projectives.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{dsum_all, OutRep, Rep, RepMorphism};
use crate::error::{Error, Result};
use crate::exactla::{RationalMatrix, Subspace, Q};
use crate::family::{check_n_stable, ClassIdx, GroupFamily, HomIdx};

fn position(list: &[HomIdx], h: HomIdx) -> usize {
    list.binary_search(&h)
        .ok()
        .or_else(|| list.iter().position(|&x| x == h))
        .expect("morphism in hom-set")
}

/// Value of `e_{G,V}` at every class: the echelon basis (as columns) of the
/// averaged subspace of `V ⊗ k[Hom(H, G)]`, indexed `a * |Hom(H,G)| + f`.
struct EValues {
    spaces: Vec<Subspace>,
    bases: Vec<RationalMatrix>,
}

fn e_values(v: &OutRep) -> EValues {
    let family = v.family();
    let g = v.class();
    let out = family.out_group(g);
    let d = v.dim();
    let mut spaces = Vec::with_capacity(family.num_classes());
    for h in 0..family.num_classes() {
        let homs = family.homs(h, g);
        let n = homs.len();
        let ambient = d * n;
        let space = if v.is_trivial() {
            // Orbit indicators under post-composition, already in echelon form.
            let mut seen = vec![false; n];
            let mut orbits = Vec::new();
            for f in 0..n {
                if seen[f] {
                    continue;
                }
                let mut orbit: Vec<usize> = out
                    .iter()
                    .map(|&s| position(homs, family.compose(s, homs[f])))
                    .collect();
                orbit.sort_unstable();
                orbit.dedup();
                for &o in &orbit {
                    seen[o] = true;
                }
                orbits.push(orbit);
            }
            let vectors: Vec<Vec<Q>> = (0..d)
                .flat_map(|a| {
                    orbits.iter().map(move |orbit| {
                        let mut vec = vec![Q::zero(); ambient];
                        for &f in orbit {
                            vec[a * n + f] = Q::one();
                        }
                        vec
                    })
                })
                .collect();
            Subspace::span(ambient, &vectors)
        } else {
            // E = (1/|Out|) Σ_σ ρ(σ⁻¹) ⊗ L_σ with L_σ e_f = e_{σ∘f}.
            let mut e = RationalMatrix::zeros(ambient, ambient);
            let scale = Q::new(One::one(), (out.len() as i64).into());
            for &s in out {
                let s_inv = family.inverse(s).expect("Out(G) is a group");
                let rho = v.matrix(s_inv);
                for (f, &hom) in homs.iter().enumerate() {
                    let sf = position(homs, family.compose(s, hom));
                    for a in 0..d {
                        for b in 0..d {
                            let x = rho.get(a, b);
                            if !x.is_zero() {
                                let cur = e.get(a * n + sf, b * n + f).clone();
                                e.set(a * n + sf, b * n + f, cur + x * &scale);
                            }
                        }
                    }
                }
            }
            e.image()
        };
        spaces.push(space);
    }
    let bases = spaces.iter().map(Subspace::inclusion).collect();
    EValues { spaces, bases }
}

fn e_from_values(v: &OutRep, values: &EValues) -> Result<Rep> {
    let family = v.family();
    let g = v.class();
    let d = v.dim();
    let dims: Vec<usize> = values.spaces.iter().map(Subspace::dim).collect();
    let transitions = family
        .homs_iter()
        .map(|(beta, hom)| {
            // β: K ↠ H acts by f ↦ f ∘ β.
            let (k, h) = (hom.source, hom.target);
            let homs_h = family.homs(h, g);
            let homs_k = family.homs(k, g);
            let (nh, nk) = (homs_h.len(), homs_k.len());
            let pre: Vec<usize> = homs_h
                .iter()
                .map(|&f| position(homs_k, family.compose(f, beta)))
                .collect();
            let basis = &values.bases[h];
            let mut moved = RationalMatrix::zeros(d * nk, basis.cols());
            for col in 0..basis.cols() {
                for a in 0..d {
                    for (f, &fb) in pre.iter().enumerate() {
                        let x = basis.get(a * nh + f, col);
                        if !x.is_zero() {
                            moved.set(a * nk + fb, col, x.clone());
                        }
                    }
                }
            }
            values.spaces[k].coordinates_of_columns(&moved)
        })
        .collect::<Result<Vec<_>>>()?;
    Rep::from_parts(family.clone(), dims, transitions)
}

/// `e_{G,V} = V ⊗_{k[Out G]} k[Hom(-, G)]`.
pub fn e_rep(v: &OutRep) -> Result<Rep> {
    e_from_values(v, &e_values(v))
}

/// `e_{G,k}` for the trivial one-dimensional `Out(G)`-representation.
pub fn e_trivial(family: &Arc<GroupFamily>, g: ClassIdx) -> Result<Rep> {
    e_rep(&OutRep::trivial(family, g, 1))
}

/// `e_G = k[Hom(-, G)]` with transitions given by precomposition.
pub fn e_g(family: &Arc<GroupFamily>, g: ClassIdx) -> Rep {
    let dims: Vec<usize> = (0..family.num_classes())
        .map(|h| family.homs(h, g).len())
        .collect();
    Rep::from_fn(family.clone(), dims.clone(), |beta| {
        let hom = family.hom(beta);
        let (k, h) = (hom.source, hom.target);
        let homs_k = family.homs(k, g);
        let mut m = RationalMatrix::zeros(dims[k], dims[h]);
        for (f, &fh) in family.homs(h, g).iter().enumerate() {
            m.set(position(homs_k, family.compose(fh, beta)), f, Q::one());
        }
        m
    })
    .expect("shapes")
}

/// Concentrated at the class of `v`, with value `v` and its action.
pub fn chi_from_outrep(v: &OutRep) -> Rep {
    let family = v.family();
    let g = v.class();
    let dims: Vec<usize> = (0..family.num_classes())
        .map(|c| if c == g { v.dim() } else { 0 })
        .collect();
    Rep::from_fn(family.clone(), dims.clone(), |h| {
        let hom = family.hom(h);
        if hom.source == g && hom.target == g {
            v.matrix(h).clone()
        } else {
            RationalMatrix::zeros(dims[hom.source], dims[hom.target])
        }
    })
    .expect("shapes")
}

/// `χ_{G,V}` with the epimorphism `e_{G,V} ↠ χ_{G,V}` that is the identity at `G`.
pub fn chi_rep(v: &OutRep) -> Result<(Rep, RepMorphism)> {
    let e = e_rep(v)?;
    let family = v.family();
    let g = v.class();
    let dims: Vec<usize> = (0..family.num_classes())
        .map(|c| if c == g { e.dim(g) } else { 0 })
        .collect();
    let chi = Rep::from_fn(family.clone(), dims.clone(), |h| {
        let hom = family.hom(h);
        if hom.source == g && hom.target == g {
            e.transition(h).clone()
        } else {
            RationalMatrix::zeros(dims[hom.source], dims[hom.target])
        }
    })?;
    let components = (0..family.num_classes())
        .map(|c| {
            if c == g {
                RationalMatrix::identity(dims[c])
            } else {
                RationalMatrix::zeros(0, e.dim(c))
            }
        })
        .collect();
    let epi = RepMorphism::new(e, chi.clone(), components)?;
    Ok((chi, epi))
}

/// The counit `e_{G, X(G)} -> X`, `v ⊗ f ↦ X(f) v`.
pub fn counit(x: &Rep, g: ClassIdx) -> Result<RepMorphism> {
    let v = OutRep::from_rep(x, g);
    let values = e_values(&v);
    let e = e_from_values(&v, &values)?;
    let family = x.family();
    let d = v.dim();
    let components = (0..family.num_classes())
        .map(|h| {
            let homs = family.homs(h, g);
            let n = homs.len();
            let mut m = RationalMatrix::zeros(x.dim(h), d * n);
            for (f, &alpha) in homs.iter().enumerate() {
                let xa = x.transition(alpha);
                for a in 0..d {
                    for r in 0..x.dim(h) {
                        m.set(r, a * n + f, xa.get(r, a).clone());
                    }
                }
            }
            m.mul(&values.bases[h])
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::new(e, x.clone(), components)
}

/// `⊕_{G ∈ supp X} e_{G, X(G)} ↠ X`.
pub fn epi_from_projectives(x: &Rep) -> Result<RepMorphism> {
    let family = x.family();
    let counits: Vec<RepMorphism> = x
        .support_set()
        .into_iter()
        .map(|g| counit(x, g))
        .collect::<Result<_>>()?;
    let parts: Vec<Rep> = counits.iter().map(|c| c.source().clone()).collect();
    let sum = dsum_all(family, &parts)?;
    let components = (0..family.num_classes())
        .map(|h| {
            counits
                .iter()
                .try_fold(RationalMatrix::zeros(x.dim(h), 0), |acc, c| {
                    acc.hstack(c.component(h))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let epi = RepMorphism::new(sum.sum, x.clone(), components)?;
    if !epi.is_epi() {
        return Err(Error::Internal(
            "counit presentation is not surjective".into(),
        ));
    }
    Ok(epi)
}

/// Level of each class in an N-stable family (position in the epi order).
pub fn level_indexing(family: &GroupFamily) -> Result<Vec<usize>> {
    let report = check_n_stable(family);
    if !report.total_order {
        return Err(Error::NotNStable(report.failures.join("; ")));
    }
    let mut level = vec![0; family.num_classes()];
    for (i, &c) in report.indexing.iter().enumerate() {
        level[c] = i;
    }
    Ok(level)
}

/// `k` at every level except `i`; identity between levels on the same side of
/// `i`, zero across it.
pub fn gamma_rep(family: &Arc<GroupFamily>, i: usize) -> Result<Rep> {
    let level = level_indexing(family)?;
    if i >= family.num_classes() {
        return Err(Error::UnknownClass(format!("level {i}")));
    }
    let dims: Vec<usize> = level.iter().map(|&l| usize::from(l != i)).collect();
    // The value on `s ↠ t` depends only on the two classes.
    let value = |s: ClassIdx, t: ClassIdx| {
        let (ds, dt) = (dims[s], dims[t]);
        if ds == 1 && dt == 1 && ((level[s] < i) == (level[t] < i)) {
            RationalMatrix::identity(1)
        } else {
            RationalMatrix::zeros(ds, dt)
        }
    };
    // Functoriality reduces to triples of classes `K ↠ H ↠ G`.
    let n = family.num_classes();
    for k in 0..n {
        for h in (0..n).filter(|&h| family.has_surjection(k, h)) {
            for g in (0..n).filter(|&g| family.has_surjection(h, g)) {
                if value(k, h).mul(&value(h, g))? != value(k, g) {
                    return Err(Error::InvalidRep(format!(
                        "γ_{i} is not a functor on {} ↠ {} ↠ {}",
                        family.label(k),
                        family.label(h),
                        family.label(g)
                    )));
                }
            }
        }
    }
    Rep::from_fn(family.clone(), dims.clone(), |h| {
        let hom = family.hom(h);
        value(hom.source, hom.target)
    })
}

/// Smallest `r` such that every `X(α): X(G_n) -> X(G_m)` with `n > r` is
/// injective, as far as the truncation can tell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TorsionFreeBound {
    /// Every failure lies strictly below the last level that can fail.
    Certified { r: usize, window_top: usize },
    /// A failure at the last checkable level; larger truncations may fail further up.
    FailsAtWindowEdge { r: usize, window_top: usize },
}

impl TorsionFreeBound {
    pub fn r(&self) -> usize {
        match *self {
            TorsionFreeBound::Certified { r, .. }
            | TorsionFreeBound::FailsAtWindowEdge { r, .. } => r,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, TorsionFreeBound::Certified { .. })
    }
}

pub fn check_eventually_torsion_free(x: &Rep) -> Result<TorsionFreeBound> {
    let family = x.family();
    let level = level_indexing(family)?;
    let top = family.num_classes().saturating_sub(1);
    let mut last_failure: Option<usize> = None;
    for (h, hom) in family.homs_iter() {
        if !x.transition(h).is_injective() {
            let n = level[hom.target];
            last_failure = Some(last_failure.map_or(n, |m| m.max(n)));
        }
    }
    Ok(match last_failure {
        None => TorsionFreeBound::Certified {
            r: 0,
            window_top: top,
        },
        Some(n) if n + 1 < top => TorsionFreeBound::Certified {
            r: n,
            window_top: top,
        },
        Some(n) => TorsionFreeBound::FailsAtWindowEdge {
            r: n,
            window_top: top,
        },
    })
}
