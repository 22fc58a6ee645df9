use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;

fn labels(f: &GroupFamily, s: &BTreeSet<ClassIdx>) -> Vec<String> {
    s.iter().map(|&c| f.label(c).to_string()).collect()
}

/// Automorphisms of an abelian group counted by brute force over generator images.
fn brute_force_aut_count(g: &AbelianGroup) -> usize {
    let elems = g.elements();
    let r = g.rank();
    let mut count = 0;
    let mut idx = vec![0usize; r];
    loop {
        let images: Vec<&Vec<u64>> = idx.iter().map(|&i| &elems[i]).collect();
        // Well defined: order of image divides the generator's order.
        let ok = images.iter().zip(g.factors()).all(|(x, &d)| {
            x.iter()
                .zip(g.factors())
                .all(|(&xi, &di)| (xi * d) % di == 0)
        });
        if ok {
            let entries: Vec<i64> = (0..r)
                .flat_map(|i| images.iter().map(move |x| x[i] as i64))
                .collect();
            if is_surjective(&HomMatrix::new(r, r, entries), g) {
                count += 1;
            }
        }
        let mut k = 0;
        loop {
            if k == r {
                return count.max(1);
            }
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn cyclic_2_2_shape() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let names: Vec<&str> = (0..3).map(|c| f.label(c)).collect();
    assert_eq!(names, ["1", "C2", "C4"]);
    let c4 = f.class_index("C4").unwrap();
    let c2 = f.class_index("C2").unwrap();
    assert_eq!(f.homs(c4, c2).len(), 1);
    assert_eq!(f.out_group(c4).len(), 2);
    assert!(f.homs(c2, c4).is_empty());
}

#[test]
fn elementary_2_2_out_group() {
    let f = GroupFamily::elementary_abelian(2, 2).unwrap();
    let top = f.class_index("C2xC2").unwrap();
    assert_eq!(f.out_group(top).len(), 6);
    let mid = f.class_index("C2").unwrap();
    assert_eq!(f.homs(top, mid).len(), 3);
}

#[test]
fn cyclic_3_0_is_trivial() {
    let f = GroupFamily::cyclic_p(3, 0).unwrap();
    assert_eq!(f.num_classes(), 1);
    assert_eq!(f.label(0), "1");
}

#[test]
fn non_prime_is_rejected() {
    assert!(GroupFamily::cyclic_p(4, 2).is_err());
}

#[test]
fn laws_hold_for_builtins() {
    for f in [
        GroupFamily::cyclic_p(2, 3).unwrap(),
        GroupFamily::cyclic_p(3, 2).unwrap(),
        GroupFamily::elementary_abelian(2, 2).unwrap(),
        GroupFamily::elementary_abelian(3, 2).unwrap(),
        GroupFamily::abelian_p(2, 4).unwrap(),
    ] {
        f.check_laws().unwrap();
    }
}

#[test]
fn out_groups_match_automorphism_counts() {
    let f = GroupFamily::abelian_p(2, 16).unwrap();
    for c in 0..f.num_classes() {
        let g = f.class(c).group.clone().unwrap();
        assert_eq!(
            f.out_group(c).len(),
            brute_force_aut_count(&g),
            "{}",
            f.label(c)
        );
    }
}

#[test]
fn up_closure_examples() {
    let f = GroupFamily::cyclic_p(2, 3).unwrap();
    let s = up_closure_of_labels(&f, &["C4"]).unwrap();
    assert_eq!(labels(&f, &s), ["C4", "C8"]);
    assert!(up_closure(&f, &BTreeSet::new()).unwrap().is_empty());
    assert_eq!(up_closure(&f, &f.all_classes()).unwrap(), f.all_classes());
    assert!(up_closure(&f, &[17].into_iter().collect()).is_err());
}

#[test]
fn truncation_flags() {
    let f = GroupFamily::cyclic_p(2, 3).unwrap();
    let (low, inc) = truncate(&f, &Selection::OrderAtMost(4)).unwrap();
    assert_eq!(low.num_classes(), 3);
    assert!(inc.is_down_closed && !inc.is_up_closed);
    assert!(inc.is_functorial());
    let (high, inc) = truncate(&f, &Selection::OrderAbove(2)).unwrap();
    assert_eq!(
        (0..high.num_classes())
            .map(|c| high.label(c))
            .collect::<Vec<_>>(),
        ["C4", "C8"]
    );
    assert!(inc.is_up_closed && !inc.is_down_closed);
    let (_, inc) = truncate(&f, &Selection::Classes(vec!["C8".into()])).unwrap();
    assert!(inc.is_up_closed);
    high.check_laws().unwrap();
}

#[test]
fn truncation_spec_rebuilds_equal_family() {
    let f = GroupFamily::cyclic_p(2, 3).unwrap();
    let (low, _) = truncate(&f, &Selection::OrderAtMost(4)).unwrap();
    let rebuilt = GroupFamily::from_spec(low.spec()).unwrap();
    assert_eq!(*rebuilt, *low);
    assert_eq!(rebuilt.num_homs(), low.num_homs());
}

#[test]
fn n_stable_reports() {
    let f = GroupFamily::cyclic_p(2, 3).unwrap();
    let r = check_n_stable(&f);
    assert!(r.total_order);
    assert_eq!(
        r.indexing.iter().map(|&c| f.label(c)).collect::<Vec<_>>(),
        ["1", "C2", "C4", "C8"]
    );
    let f = GroupFamily::elementary_abelian(2, 2).unwrap();
    assert!(check_n_stable(&f).total_order);
    let f = GroupFamily::abelian_p(2, 8).unwrap();
    let r = check_n_stable(&f);
    assert!(!r.total_order);
    assert!(!r.failures.is_empty());
}

#[test]
fn wide_closure() {
    let f = GroupFamily::abelian_p(2, 16).unwrap();
    let s: BTreeSet<_> = ["1", "C2", "C4"]
        .iter()
        .map(|l| f.class_index(l).unwrap())
        .collect();
    assert!(is_widely_closed(&s, &f).unwrap());
    let f = GroupFamily::elementary_abelian(2, 3).unwrap();
    let top2 = [f.class_index("C2xC2").unwrap()].into_iter().collect();
    // Every span out of F_2^2 has an image of rank 2.
    assert!(is_widely_closed(&top2, &f).unwrap());
    let pair: BTreeSet<_> = ["C2xC2xC2", "C2"]
        .iter()
        .map(|l| f.class_index(l).unwrap())
        .collect();
    // Two distinct functionals out of F_2^3 have image F_2^2, which is missing.
    assert!(!is_widely_closed(&pair, &f).unwrap());
}

#[test]
fn down_closed_sets_are_widely_closed() {
    let f = GroupFamily::abelian_p(2, 16).unwrap();
    for n in [1, 2, 4, 8, 16] {
        let s: BTreeSet<_> = (0..f.num_classes()).filter(|&c| f.order(c) <= n).collect();
        assert!(is_down_closed(&f, &s));
        assert!(is_widely_closed(&s, &f).unwrap());
    }
}

fn s3_table() -> CustomTable {
    // 1, C2, S3: one class S3 ↠ C2 (sign), Out(S3) trivial.
    let obj = |l: &str, o| CustomObject {
        label: l.into(),
        order: o,
        group: None,
    };
    let hom = |l: &str, s: &str, t: &str| CustomHom {
        label: l.into(),
        source: s.into(),
        target: t.into(),
    };
    CustomTable {
        objects: vec![obj("1", 1), obj("C2", 2), obj("S3", 6)],
        homs: vec![
            hom("id1", "1", "1"),
            hom("idC2", "C2", "C2"),
            hom("idS3", "S3", "S3"),
            hom("c2_1", "C2", "1"),
            hom("s3_1", "S3", "1"),
            hom("sign", "S3", "C2"),
        ],
        compose: vec![["c2_1".into(), "sign".into(), "s3_1".into()]],
        identity: [("1", "id1"), ("C2", "idC2"), ("S3", "idS3")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
    }
}

#[test]
fn custom_table_is_accepted() {
    let f = GroupFamily::custom(s3_table()).unwrap();
    assert_eq!(f.num_classes(), 3);
    assert!(check_n_stable(&f).total_order);
    let s = [f.class_index("S3").unwrap()].into_iter().collect();
    assert!(matches!(
        is_widely_closed(&s, &f),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn custom_table_missing_composite_is_rejected() {
    let mut t = s3_table();
    t.compose.clear();
    let err = GroupFamily::custom(t).unwrap_err();
    match err {
        Error::InvalidTable { witness, .. } => assert!(witness.contains("sign")),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn custom_table_bad_associativity_is_rejected() {
    // C2 with a non-identity endomorphism s whose square is declared s itself.
    let mut t = s3_table();
    t.homs.push(CustomHom {
        label: "s".into(),
        source: "C2".into(),
        target: "C2".into(),
    });
    t.compose.push(["s".into(), "s".into(), "s".into()]);
    t.compose.push(["c2_1".into(), "s".into(), "c2_1".into()]);
    t.compose.push(["s".into(), "sign".into(), "sign".into()]);
    let err = GroupFamily::custom(t).unwrap_err();
    assert!(matches!(err, Error::InvalidTable { .. }));
}

#[test]
fn custom_table_order_violation() {
    let mut t = s3_table();
    t.homs.push(CustomHom {
        label: "up".into(),
        source: "C2".into(),
        target: "S3".into(),
    });
    assert!(GroupFamily::custom(t).is_err());
}

#[test]
fn family_spec_json_round_trip() {
    let spec: FamilySpec =
        serde_json::from_str(r#"{"kind":"cyclic_p","p":2,"max_exponent":3}"#).unwrap();
    assert_eq!(
        spec,
        FamilySpec::CyclicP {
            p: 2,
            max_exponent: Some(3)
        }
    );
    let t = FamilySpec::Custom(s3_table());
    let back: FamilySpec = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
}

proptest! {
    #[test]
    fn up_closure_is_a_closure(mask in 0u32..(1 << 7)) {
        let f = GroupFamily::abelian_p(2, 8).unwrap();
        let s: BTreeSet<_> = (0..f.num_classes()).filter(|&c| mask & (1 << c) != 0).collect();
        let u = up_closure(&f, &s).unwrap();
        prop_assert!(s.is_subset(&u));
        prop_assert_eq!(up_closure(&f, &u).unwrap(), u.clone());
        prop_assert!(is_up_closed(&f, &u));
        let bigger: BTreeSet<_> = s.iter().copied().chain([0]).collect();
        prop_assert!(u.is_subset(&up_closure(&f, &bigger).unwrap()));
    }

    #[test]
    fn threshold_splits_partition(e in 0u32..5, t in 0u32..5) {
        let f = GroupFamily::cyclic_p(2, e).unwrap();
        let n = 1u64 << t;
        let (a, ia) = truncate(&f, &Selection::OrderAtMost(n)).unwrap();
        let (b, ib) = truncate(&f, &Selection::OrderAbove(n)).unwrap();
        prop_assert_eq!(a.num_classes() + b.num_classes(), f.num_classes());
        prop_assert!(ia.image().is_disjoint(&ib.image()));
        prop_assert!(ia.is_down_closed);
        prop_assert!(ib.is_up_closed);
    }
}
