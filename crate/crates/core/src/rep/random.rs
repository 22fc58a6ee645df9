//! Seeded generators of small random objects and morphisms, for property
//! checks and the command-line invariant suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    chi_from_outrep, dsum, e_g, e_trivial, hom_space, quotient_by_subspaces, random_combination,
    subrep_generated, unit, OutRep, Rep, RepMorphism,
};
use crate::exactla::{q, RationalMatrix, Subspace, Q};
use crate::family::{ClassIdx, FamilySpec, GroupFamily, Selection};

/// Builtin families with at most four classes and small hom-sets.
pub fn small_families() -> Vec<Arc<GroupFamily>> {
    let specs = [
        FamilySpec::CyclicP {
            p: 2,
            max_exponent: Some(1),
        },
        FamilySpec::CyclicP {
            p: 2,
            max_exponent: Some(2),
        },
        FamilySpec::CyclicP {
            p: 2,
            max_exponent: Some(3),
        },
        FamilySpec::CyclicP {
            p: 3,
            max_exponent: Some(2),
        },
        FamilySpec::ElementaryAbelian {
            p: 2,
            max_rank: Some(2),
        },
        FamilySpec::AbelianP {
            p: 2,
            order_bound: 4,
        },
        FamilySpec::Truncation {
            base: Box::new(FamilySpec::AbelianP {
                p: 2,
                order_bound: 8,
            }),
            select: Selection::Classes(vec!["C2".into(), "C4".into(), "C2xC2".into(), "C8".into()]),
        },
    ];
    specs
        .iter()
        .map(|s| GroupFamily::from_spec(s).expect("builtin family"))
        .collect()
}

pub fn random_invertible(n: usize, rng: &mut impl Rng) -> RationalMatrix {
    loop {
        let entries: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-2..=2)).collect();
        let m = RationalMatrix::from_i64(n, n, &entries);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_vector(n: usize, rng: &mut impl Rng) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()
}

/// Samples objects with pointwise dimension at most `max_dim`, built from
/// sums of unit, `e`, and `χ` blocks, optionally cut down to a random
/// subobject or quotient, then put in a random basis.
pub struct RepSampler {
    family: Arc<GroupFamily>,
    max_dim: usize,
    blocks: Vec<Rep>,
}

impl RepSampler {
    pub fn new(family: &Arc<GroupFamily>, max_dim: usize) -> RepSampler {
        let fits = |r: &Rep| r.dims().iter().all(|&d| d <= max_dim);
        let mut blocks = vec![unit(family)];
        for g in 0..family.num_classes() {
            blocks.push(chi_from_outrep(&OutRep::trivial(family, g, 1)));
            if family.out_group(g).len() <= max_dim {
                blocks.push(chi_from_outrep(&OutRep::regular(family, g)));
            }
            if let Ok(e) = e_trivial(family, g) {
                blocks.push(e);
            }
            blocks.push(e_g(family, g));
        }
        blocks.retain(|b| fits(b) && !b.is_zero());
        RepSampler {
            family: family.clone(),
            max_dim,
            blocks,
        }
    }

    pub fn family(&self) -> &Arc<GroupFamily> {
        &self.family
    }

    pub fn blocks(&self) -> &[Rep] {
        &self.blocks
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Rep {
        loop {
            if let Some(x) = self.try_sample(rng) {
                return x;
            }
        }
    }

    fn try_sample(&self, rng: &mut impl Rng) -> Option<Rep> {
        let k = rng.gen_range(1..=3);
        let mut x = Rep::zero(&self.family);
        for _ in 0..k {
            x = dsum(&x, self.blocks.choose(rng)?).ok()?;
        }
        match rng.gen_range(0..3) {
            0 => {
                let (sub, _) = subrep_generated(&x, &random_elements(&x, rng)).ok()?;
                x = sub;
            }
            1 => {
                let (_, mono) = subrep_generated(&x, &random_elements(&x, rng)).ok()?;
                let spaces: Vec<Subspace> = mono
                    .components()
                    .iter()
                    .map(RationalMatrix::image)
                    .collect();
                x = quotient_by_subspaces(&x, &spaces).ok()?.0;
            }
            _ => {}
        }
        if x.dims().iter().any(|&d| d > self.max_dim) {
            return None;
        }
        Some(random_basis(&x, rng))
    }

    /// A random subobject inclusion into a random object.
    pub fn sample_mono(&self, rng: &mut impl Rng) -> RepMorphism {
        let x = self.sample(rng);
        let elements = random_elements(&x, rng);
        subrep_generated(&x, &elements).expect("valid elements").1
    }
}

/// One or two random elements at random supported classes.
pub fn random_elements(x: &Rep, rng: &mut impl Rng) -> Vec<(ClassIdx, Vec<Q>)> {
    let supp: Vec<ClassIdx> = x.support_set().into_iter().collect();
    if supp.is_empty() {
        return Vec::new();
    }
    (0..rng.gen_range(1..=2))
        .map(|_| {
            let g = *supp.choose(rng).expect("nonempty");
            (g, random_vector(x.dim(g), rng))
        })
        .collect()
}

pub fn random_basis(x: &Rep, rng: &mut impl Rng) -> Rep {
    let p: Vec<RationalMatrix> = x
        .dims()
        .iter()
        .map(|&d| random_invertible(d, rng))
        .collect();
    x.change_basis(&p).expect("invertible").0
}

/// A random element of the morphism space, zero when the space is zero.
pub fn random_morphism(x: &Rep, y: &Rep, rng: &mut impl Rng) -> RepMorphism {
    let basis = hom_space(x, y, None).expect("same family");
    random_combination(&basis, rng).unwrap_or_else(|| RepMorphism::zero(x, y).expect("shapes"))
}

/// A random nonzero `Out(G)`-representation of dimension at most `max_dim`,
/// read off a sampled object.
pub fn random_outrep(sampler: &RepSampler, g: ClassIdx, rng: &mut impl Rng) -> OutRep {
    let family = sampler.family();
    for _ in 0..20 {
        let x = sampler.sample(rng);
        if x.dim(g) > 0 {
            return OutRep::from_rep(&x, g);
        }
    }
    let d = rng.gen_range(1..=sampler.max_dim.max(1));
    OutRep::trivial(family, g, d)
}
