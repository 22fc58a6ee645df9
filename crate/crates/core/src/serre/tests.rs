use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::family::GroupFamily;
use crate::rep::random::{small_families, RepSampler};
use crate::rep::{dsum, e_g, tensor, unit};

fn chi(f: &Arc<GroupFamily>, g: ClassIdx) -> Rep {
    chi_from_outrep(&OutRep::trivial(f, g, 1))
}

fn set(items: &[usize]) -> BTreeSet<usize> {
    items.iter().copied().collect()
}

#[test]
fn membership_examples() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let c2 = f.class_index("C2").unwrap();
    let ideal = IdealSpec::generated_by(&f, vec![("e".into(), e_g(&f, c2))]).unwrap();
    assert!(member(&chi(&f, c2), &ideal).unwrap());
    let bottom = IdealSpec::generated_by(&f, vec![("chi".into(), chi(&f, 0))]).unwrap();
    assert!(!member(&unit(&f), &bottom).unwrap());
    assert!(member(&Rep::zero(&f), &bottom).unwrap());
    let cert = member_certified(&chi(&f, c2), &ideal).unwrap().unwrap();
    assert!(cert.verify().unwrap());
    assert!(member_certified(&unit(&f), &bottom).unwrap().is_none());
}

#[test]
fn ideals_are_determined_by_support() {
    let f = GroupFamily::cyclic_p(3, 2).unwrap();
    let a = IdealSpec::generated_by(&f, vec![("unit".into(), unit(&f))]).unwrap();
    let b = IdealSpec::from_support(&f, &f.all_classes()).unwrap();
    assert_eq!(a, b);
    assert!(!a.is_proper());
    assert!(IdealSpec::from_support(&f, &set(&[7])).is_err());
}

#[test]
fn decompose_unit_on_two_classes() {
    let f = GroupFamily::cyclic_p(2, 1).unwrap();
    let cert = decompose_chi(&unit(&f)).unwrap();
    let c2 = f.class_index("C2").unwrap();
    let one = f.class_index("1").unwrap();
    assert_eq!(cert.subquotients(), vec![(c2, 1), (one, 1)]);
    assert!(cert.verify().unwrap());
}

#[test]
fn decompose_chi_is_single_step() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let cert = decompose_chi(&chi(&f, 1)).unwrap();
    assert_eq!(cert.steps.len(), 1);
    assert!(cert.verify().unwrap());
}

#[test]
fn decompose_e_c2() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let c2 = f.class_index("C2").unwrap();
    let c4 = f.class_index("C4").unwrap();
    let cert = decompose_chi(&e_g(&f, c2)).unwrap();
    assert_eq!(cert.subquotients(), vec![(c4, 1), (c2, 1)]);
    assert_eq!(cert.steps[0].next().dims(), &[0, 1, 0]);
    let report = cert.report().unwrap();
    assert!(report.verified);
    let text = serde_json::to_string(&report).unwrap();
    let back: CertificateReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

#[test]
fn decompose_zero_is_empty_and_verified() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let cert = decompose_chi(&Rep::zero(&f)).unwrap();
    assert!(cert.steps.is_empty());
    assert!(cert.verify().unwrap());
}

#[test]
fn gamma_filtration_examples() {
    let f = GroupFamily::cyclic_p(2, 4).unwrap();
    let ses = gamma_filtration(&chi(&f, 2), 2).unwrap();
    assert!(ses.sub().is_zero());
    assert!(matches!(
        gamma_filtration(&unit(&f), 1),
        Err(Error::SupportBelow { index: 0 })
    ));
    // Supported on levels 1..=3: three quotient pieces.
    let x = dsum(
        &chi(&f, 1),
        &tensor(&e_g(&f, 2), &NamedObject::Gamma(4).materialize(&f).unwrap()).unwrap(),
    )
    .unwrap();
    let cert = gamma_certificate(&x).unwrap();
    assert_eq!(
        cert.subquotients()
            .iter()
            .map(|(c, _)| *c)
            .collect::<Vec<_>>(),
        vec![1, 2, 3]
    );
    assert!(cert.verify().unwrap());
    let e2 = e_g(&f, 2);
    let first = gamma_filtration(&e2, 2).unwrap();
    assert_eq!(first.quotient().dims(), &[0, 0, e2.dim(2), 0, 0]);
}

#[test]
fn serre_plus_examples() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let y = chi(&f, 1);
    let x = unit(&f);
    assert!(!serre_plus_member(&x, &y, f.max_order()).unwrap());
    assert!(serre_plus_member(&chi(&f, 2), &y, 2).unwrap());
    assert!(!serre_plus_member(&chi(&f, 2), &y, 4).unwrap());
    let bottom = chi(&f, 0);
    assert!(serre_plus_member(&x, &bottom, 0).unwrap());
}

#[test]
fn closure_from_e_reaches_upward_closure() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let catalog: Vec<Rep> = (0..3).map(|g| chi(&f, g)).collect();
    for g in 0..3 {
        let r =
            brute_force_closure(&[e_g(&f, g)], &catalog, &[], ClosureBudget::default()).unwrap();
        assert!(!r.exhausted);
        assert_eq!(r.reached_indices(), (g..3).collect::<Vec<_>>());
    }
    let zero =
        brute_force_closure(&[Rep::zero(&f)], &catalog, &[], ClosureBudget::default()).unwrap();
    assert!(zero.reached_indices().is_empty());
    let all = brute_force_closure(&[unit(&f)], &catalog, &[], ClosureBudget::default()).unwrap();
    assert_eq!(all.reached_indices(), vec![0, 1, 2]);
}

#[test]
fn closure_uses_extensions() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let catalog = vec![chi(&f, 2), e_g(&f, 1)];
    let r = brute_force_closure(
        &[chi(&f, 1), chi(&f, 2)],
        &catalog,
        &[],
        ClosureBudget::default(),
    )
    .unwrap();
    assert_eq!(
        r.reasons[1],
        Some(Reason::Extension {
            sub: 0,
            cokernel_from_pool: 0
        })
    );
}

#[test]
fn symbolic_examples() {
    let chi_i = SymbolicObject::named(&NamedObject::Chi(2));
    let gamma_j = SymbolicObject::named(&NamedObject::Gamma(3));
    assert!(symbolic_member(&chi_i, &gamma_j).unwrap());
    assert!(!symbolic_member(&gamma_j, &chi_i).unwrap());
    let s = set(&[1, 4, 6]);
    let prod = NamedObject::tensor_all(s.iter().map(|&i| NamedObject::Gamma(i)));
    let x = SymbolicObject {
        name: "x".into(),
        descriptor: SupportDescriptor::Cofinite(s),
        universe: Universe::Naturals,
        attestation: Attestation::Builtin,
    };
    let p = SymbolicObject::named(&prod);
    assert!(symbolic_member(&x, &p).unwrap() && symbolic_member(&p, &x).unwrap());
    let unattested = SymbolicObject {
        attestation: Attestation::Unattested,
        ..x.clone()
    };
    assert_eq!(
        symbolic_member(&chi_i, &unattested),
        Err(Error::NotAttested)
    );
    let finite_universe = SymbolicObject {
        universe: Universe::Finite(3),
        ..x
    };
    assert!(matches!(
        symbolic_member(&chi_i, &finite_universe),
        Err(Error::NonCanonical(_))
    ));
}

#[test]
fn window_attestation() {
    let f = GroupFamily::cyclic_p(2, 5).unwrap();
    let g = NamedObject::Gamma(2).materialize(&f).unwrap();
    let s = SymbolicObject::from_window("g", &g).unwrap();
    assert_eq!(s.descriptor, SupportDescriptor::Cofinite(set(&[2])));
    assert_eq!(s.attestation, Attestation::Window { top: 5 });
    for i in [4, 5] {
        let edge = NamedObject::Chi(i).materialize(&f).unwrap();
        assert_eq!(
            SymbolicObject::from_window("t", &edge).unwrap().attestation,
            Attestation::Unattested
        );
    }
    let low = NamedObject::Chi(2).materialize(&f).unwrap();
    let s = SymbolicObject::from_window("c", &low).unwrap();
    assert_eq!(
        (s.descriptor, s.attestation),
        (
            SupportDescriptor::singleton(2),
            Attestation::Window { top: 5 }
        )
    );
}

#[test]
fn symbolic_ideal_support() {
    let ideal = SymbolicIdeal::generated_by(vec![
        SymbolicObject::named(&NamedObject::Chi(1)),
        SymbolicObject::named(&NamedObject::Gamma(1)),
    ])
    .unwrap();
    assert_eq!(ideal.support, SupportDescriptor::full(Universe::Naturals));
}

#[test]
fn named_descriptors_match_truncations() {
    let f = GroupFamily::cyclic_p(2, 6).unwrap();
    let objects = [
        NamedObject::Unit,
        NamedObject::Zero,
        NamedObject::Chi(3),
        NamedObject::Gamma(0),
        NamedObject::E(2),
        NamedObject::ETrivial(4),
        NamedObject::tensor(NamedObject::Gamma(1), NamedObject::E(3)),
        NamedObject::sum(NamedObject::Chi(0), NamedObject::Chi(5)),
    ];
    for o in objects {
        let x = o.materialize(&f).unwrap();
        assert!(x.is_valid(), "{o}");
        assert_eq!(x.support_set(), o.descriptor().below(7), "{o}");
    }
}

fn family_and_seed() -> impl Strategy<Value = (usize, u64)> {
    (0..small_families().len(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_matches_support((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = RepSampler::new(&f, 3).sample(&mut rng);
        let cert = decompose_chi(&x).unwrap();
        prop_assert!(cert.verify().unwrap());
        let mut got = cert.subquotients();
        got.sort();
        let expected: Vec<(usize, usize)> = x.support_set().into_iter().map(|g| (g, x.dim(g))).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn serre_plus_is_monotone((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = RepSampler::new(&f, 3);
        let (x, y) = (s.sample(&mut rng), s.sample(&mut rng));
        let mut previous = true;
        for n in 0..=f.max_order() {
            let now = serre_plus_member(&x, &y, n).unwrap();
            prop_assert!(previous || !now);
            previous = now;
        }
        let ideal = IdealSpec::generated_by(&f, vec![("y".into(), y.clone())]).unwrap();
        prop_assert_eq!(serre_plus_member(&x, &y, f.max_order()).unwrap(), member(&x, &ideal).unwrap());
    }

    #[test]
    fn radical((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = RepSampler::new(&f, 3);
        let (x, y) = (s.sample(&mut rng), s.sample(&mut rng));
        let ideal = IdealSpec::generated_by(&f, vec![("y".into(), y)]).unwrap();
        prop_assert_eq!(member(&x, &ideal).unwrap(), member(&tensor(&x, &x).unwrap(), &ideal).unwrap());
    }
}
