//! Seeded property suites over one family, summarized as pass/fail counts.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::{truncate, GroupFamily, Selection};
use crate::kan::{adjunction_check, glue_ses};
use crate::rep::random::RepSampler;
use crate::rep::{chi_from_outrep, cokernel, dsum, e_g, kernel, tensor, unit, OutRep, Rep};
use crate::serre::{
    brute_force_closure, decompose_chi, member, serre_plus_member, ClosureBudget, IdealSpec,
};
use crate::spectrum::{spc, spc_n_stable};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub family: Arc<GroupFamily>,
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub closure: ClosureBudget,
}

impl SuiteConfig {
    pub fn new(family: &Arc<GroupFamily>) -> SuiteConfig {
        SuiteConfig {
            family: family.clone(),
            seed: 0,
            trials: 20,
            max_dim: 3,
            closure: ClosureBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub property: String,
    pub passed: usize,
    pub failed: usize,
    /// Cases that hit a budget and count as neither.
    pub inconclusive: usize,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub family: String,
    pub seed: u64,
    pub results: Vec<SuiteResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(SuiteResult::ok)
    }

    pub fn budget_exhausted(&self) -> bool {
        self.results.iter().any(|r| r.inconclusive > 0)
    }
}

struct Tally {
    property: &'static str,
    passed: usize,
    failed: usize,
    inconclusive: usize,
}

impl Tally {
    fn new(property: &'static str) -> Tally {
        Tally {
            property,
            passed: 0,
            failed: 0,
            inconclusive: 0,
        }
    }

    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            property: self.property.to_string(),
            passed: self.passed,
            failed: self.failed,
            inconclusive: self.inconclusive,
        }
    }
}

fn chi(f: &Arc<GroupFamily>, g: usize) -> Rep {
    chi_from_outrep(&OutRep::trivial(f, g, 1))
}

/// Runs every suite; the seed fixes all random choices.
pub fn run_suites(config: &SuiteConfig) -> Result<SuiteReport> {
    let f = &config.family;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sampler = RepSampler::new(f, config.max_dim);
    let samples: Vec<Rep> = (0..config.trials.max(1))
        .map(|_| sampler.sample(&mut rng))
        .collect();
    let mut results = Vec::new();

    let mut t = Tally::new("family composition laws");
    t.record(f.check_laws().is_ok());
    results.push(t.finish());

    let mut t = Tally::new("sampled objects satisfy the functor laws");
    for x in &samples {
        t.record(x.is_valid());
    }
    results.push(t.finish());

    let mut t = Tally::new("support of unit, sums and tensors");
    t.record(unit(f).support_set() == f.all_classes());
    for pair in samples.windows(2) {
        let (x, y) = (&pair[0], &pair[1]);
        let sx = x.support_set();
        let sy = y.support_set();
        t.record(dsum(x, y)?.support_set() == &sx | &sy);
        t.record(tensor(x, y)?.support_set() == &sx & &sy);
    }
    results.push(t.finish());

    let mut t = Tally::new("support is additive on short exact sequences");
    for _ in 0..config.trials {
        let mono = sampler.sample_mono(&mut rng);
        let (q, _) = cokernel(&mono)?;
        let (k, _) = kernel(&mono)?;
        let middle = mono.target().support_set();
        let parts: BTreeSet<usize> = &mono.source().support_set() | &q.support_set();
        t.record(k.is_zero() && middle == parts);
    }
    results.push(t.finish());

    let mut t = Tally::new("concentrated filtrations verify and match support");
    for x in &samples {
        let cert = decompose_chi(x)?;
        let mut pieces = cert.subquotients();
        pieces.sort();
        let expected: Vec<(usize, usize)> =
            x.support_set().into_iter().map(|g| (g, x.dim(g))).collect();
        t.record(cert.verify()? && pieces == expected);
    }
    results.push(t.finish());

    let mut t = Tally::new("membership agrees with the closure oracle");
    let n = f.num_classes();
    let mut catalog: Vec<Rep> = (0..n).map(|g| chi(f, g)).collect();
    catalog.extend(
        (0..n)
            .map(|g| e_g(f, g))
            .filter(|e| e.dims().iter().all(|&d| d <= 3)),
    );
    for x in samples.iter().take(config.trials.min(6)) {
        let ideal = IdealSpec::generated_by(f, vec![("x".into(), x.clone())])?;
        let closure =
            brute_force_closure(std::slice::from_ref(x), &catalog, &catalog, config.closure)?;
        for (i, c) in catalog.iter().enumerate() {
            let criterion = member(c, &ideal)?;
            if closure.reached(i) {
                t.record(criterion);
            } else if criterion && closure.exhausted {
                t.inconclusive += 1;
            } else {
                t.record(!criterion);
            }
        }
    }
    results.push(t.finish());

    let mut t = Tally::new("ideals are radical");
    for pair in samples.windows(2) {
        let ideal = IdealSpec::generated_by(f, vec![("y".into(), pair[1].clone())])?;
        let x = &pair[0];
        t.record(member(x, &ideal)? == member(&tensor(x, x)?, &ideal)?);
    }
    results.push(t.finish());

    let mut t = Tally::new("tensoring preserves monomorphisms");
    for x in &samples {
        let mono = sampler.sample_mono(&mut rng);
        let id = crate::rep::RepMorphism::identity(x);
        t.record(crate::rep::tensor_morphisms(&mono, &id)?.is_mono());
    }
    results.push(t.finish());

    let mut t = Tally::new("enlarged ideals contain objects with smaller support");
    for pair in samples.windows(2) {
        let (x, y) = (&pair[0], &pair[1]);
        if x.support_set().is_subset(&y.support_set()) {
            for m in 0..=f.max_order() {
                t.record(serre_plus_member(x, y, m)?);
            }
        }
    }
    results.push(t.finish());

    let mut t = Tally::new("Kan adjunctions and gluing sequences");
    let orders: BTreeSet<u64> = (0..n).map(|c| f.order(c)).collect();
    for &m in &orders {
        let down = truncate(f, &Selection::OrderAtMost(m))?.1;
        let up = truncate(f, &Selection::OrderAbove(m))?.1;
        let x = &samples[rng.gen_range(0..samples.len())];
        t.record(glue_ses(&down, &up, x)?.report.is_exact());
        if !up.sub.all_classes().is_empty() {
            let sub_x = RepSampler::new(&up.sub, 2).sample(&mut rng);
            t.record(adjunction_check(&up, &sub_x, x)?.holds());
        }
    }
    results.push(t.finish());

    let mut t = Tally::new("spectrum is discrete with one group prime per class");
    if n <= crate::spectrum::ENUMERATION_GUARD {
        let space = spc(f)?;
        t.record(space.all_passed() && space.point_count() == Some(n));
    } else {
        t.inconclusive += 1;
    }
    results.push(t.finish());

    if let Some(kind) = f.spec().n_stable_kind() {
        let mut t = Tally::new("N-stable kind has spectrum the one-point compactification");
        t.record(spc_n_stable(&kind.truncation(0))?.all_passed());
        results.push(t.finish());
    }

    Ok(SuiteReport {
        family: f.name(),
        seed: config.seed,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_small_families() {
        for f in [
            GroupFamily::cyclic_p(2, 2).unwrap(),
            GroupFamily::elementary_abelian(2, 1).unwrap(),
        ] {
            let mut config = SuiteConfig::new(&f);
            config.trials = 6;
            let report = run_suites(&config).unwrap();
            assert!(report.passed(), "{report:?}");
            let again = run_suites(&config).unwrap();
            assert_eq!(report, again);
        }
    }
}
