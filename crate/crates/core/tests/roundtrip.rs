//! Every emitted document re-parses to an equal value.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use globrep::family::{FamilySpec, GroupFamily, NStableKind, Selection};
use globrep::rep::random::{small_families, RepSampler};
use globrep::rep::{read_rep, write_rep};
use globrep::serre::{decompose_chi, member_certified, IdealSpec, NamedObject, SupportDescriptor};
use globrep::spectrum::{
    decide_closed, spc, spc_n_stable, ClosedDecision, PointSet, SpectrumReport,
};

fn round_trip<T>(value: &T) -> T
where
    T: serde::Serialize + serde::de::DeserializeOwned,
{
    serde_json::from_str(&serde_json::to_string_pretty(value).unwrap()).unwrap()
}

#[test]
fn sampled_objects_survive_write_and_read() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for f in small_families() {
        let sampler = RepSampler::new(&f, 3);
        for _ in 0..5 {
            let x = sampler.sample(&mut rng);
            let text = write_rep(&x);
            assert_eq!(read_rep(&text).unwrap(), x);
            assert_eq!(write_rep(&read_rep(&text).unwrap()), text);
        }
    }
}

#[test]
fn certificates_and_reports_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let x = RepSampler::new(&f, 3).sample(&mut rng);
    let report = decompose_chi(&x).unwrap().report().unwrap();
    assert!(report.verified);
    assert_eq!(round_trip(&report), report);

    let ideal = IdealSpec::generated_by(&f, vec![("x".into(), x.clone())]).unwrap();
    let cert = member_certified(&x, &ideal)
        .unwrap()
        .expect("a generator is a member");
    let member_report = cert.report().unwrap();
    assert_eq!(round_trip(&member_report), member_report);

    let spectrum: SpectrumReport = spc(&f).unwrap().report();
    assert_eq!(round_trip(&spectrum), spectrum);
    let unbounded = spc_n_stable(&NStableKind::CyclicP { p: 3 }.truncation(0))
        .unwrap()
        .report();
    assert_eq!(round_trip(&unbounded), unbounded);
}

#[test]
fn family_documents_round_trip() {
    let specs = [
        FamilySpec::CyclicP {
            p: 5,
            max_exponent: Some(2),
        },
        FamilySpec::ElementaryAbelian {
            p: 2,
            max_rank: None,
        },
        FamilySpec::AbelianP {
            p: 3,
            order_bound: 27,
        },
        FamilySpec::Truncation {
            base: Box::new(FamilySpec::AbelianP {
                p: 2,
                order_bound: 8,
            }),
            select: Selection::OrderAbove(2),
        },
    ];
    for spec in specs {
        assert_eq!(round_trip(&spec), spec);
    }
}

#[test]
fn closure_decisions_round_trip() {
    let sets = [
        PointSet::new(
            SupportDescriptor::Finite([1, 4].into_iter().collect()),
            false,
        ),
        PointSet::new(SupportDescriptor::Finite([2].into_iter().collect()), true),
        PointSet::new(
            SupportDescriptor::Cofinite([0, 3].into_iter().collect()),
            true,
        ),
        PointSet::new(
            SupportDescriptor::Cofinite([0].into_iter().collect()),
            false,
        ),
    ];
    for s in &sets {
        let d: ClosedDecision = decide_closed(s);
        assert_eq!(round_trip(&d), d);
        assert_eq!(round_trip(s), *s);
    }
    let x = NamedObject::sum(
        NamedObject::Chi(2),
        NamedObject::tensor(NamedObject::Gamma(1), NamedObject::E(3)),
    );
    assert_eq!(round_trip(&x), x);
}
