use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::family::{full_subfamily, truncate, GroupFamily, Selection};
use crate::rep::random::{small_families, RepSampler};
use crate::rep::{chi_from_outrep, e_g, is_isomorphic, unit, OutRep};

fn sub_on(f: &Arc<GroupFamily>, labels: &[&str]) -> Inclusion {
    let select = Selection::Classes(labels.iter().map(|s| s.to_string()).collect());
    truncate(f, &select).unwrap().1
}

fn iso(a: &Rep, b: &Rep) -> bool {
    is_isomorphic(a, b).unwrap().is_some()
}

#[test]
fn restriction_copies_values() {
    let f = GroupFamily::cyclic_p(2, 3).unwrap();
    let i = sub_on(&f, &["C2", "C8"]);
    let r = restrict(&i, &e_g(&f, 1)).unwrap();
    assert!(r.is_valid());
    assert_eq!(r.dims(), &[e_g(&f, 1).dim(1), e_g(&f, 1).dim(3)]);
}

#[test]
fn left_extension_of_unit_from_bottom_is_unit() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let i = sub_on(&f, &["1", "C2"]);
    assert!(i.is_down_closed && !i.is_up_closed);
    let l = left_kan(&i, &unit(&i.sub)).unwrap();
    assert!(l.is_valid());
    assert!(iso(&l, &unit(&f)));
}

#[test]
fn right_extension_of_unit_from_top_is_unit() {
    let f = GroupFamily::cyclic_p(3, 2).unwrap();
    let i = sub_on(&f, &["C3", "C9"]);
    let r = right_kan(&i, &unit(&i.sub)).unwrap();
    assert!(r.is_valid());
    assert!(iso(&r, &unit(&f)));
}

#[test]
fn left_extension_preserves_representables() {
    for f in small_families() {
        let n = f.num_classes();
        for mask in 1u32..(1 << n) {
            let classes: BTreeSet<usize> = (0..n).filter(|c| mask >> c & 1 == 1).collect();
            let (sub, i) = full_subfamily(&f, &classes, f.spec().clone()).unwrap();
            for g in 0..sub.num_classes() {
                let l = left_kan_general(&i, &e_g(&sub, g)).unwrap();
                assert!(l.is_valid());
                assert!(
                    iso(&l, &e_g(&f, i.object_map[g])),
                    "{} {:?} {g}",
                    f.name(),
                    classes
                );
            }
        }
    }
}

#[test]
fn identity_inclusion_is_trivial() {
    let f = GroupFamily::elementary_abelian(2, 2).unwrap();
    let i = Inclusion::identity(&f);
    let x = e_g(&f, 1);
    assert_eq!(left_kan_general(&i, &x).unwrap().dims(), x.dims());
    assert!(iso(&left_kan_general(&i, &x).unwrap(), &x));
    assert!(iso(&right_kan_general(&i, &x).unwrap(), &x));
}

#[test]
fn fast_paths_agree_with_formulas() {
    let f = GroupFamily::cyclic_p(2, 3).unwrap();
    let up = truncate(&f, &Selection::OrderAbove(2)).unwrap().1;
    let down = truncate(&f, &Selection::OrderAtMost(2)).unwrap().1;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let x = RepSampler::new(&up.sub, 2).sample(&mut rng);
        assert_eq!(
            left_kan_general(&up, &x).unwrap(),
            extend_by_zero(&up, &x).unwrap()
        );
        let y = RepSampler::new(&down.sub, 2).sample(&mut rng);
        assert!(iso(
            &right_kan_general(&down, &y).unwrap(),
            &extend_by_zero(&down, &y).unwrap()
        ));
    }
}

#[test]
fn gluing_sequence_on_unit() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let down = truncate(&f, &Selection::OrderAtMost(1)).unwrap().1;
    let up = truncate(&f, &Selection::OrderAbove(1)).unwrap().1;
    let g = glue_ses(&down, &up, &unit(&f)).unwrap();
    assert!(g.report.is_exact());
    assert_eq!(g.ses.sub().dims(), &[0, 1, 1]);
    assert_eq!(g.ses.quotient().dims(), &[1, 0, 0]);
    let overlap = truncate(&f, &Selection::OrderAtMost(2)).unwrap().1;
    assert!(matches!(
        glue_ses(&overlap, &up, &unit(&f)),
        Err(Error::NotAPartition(_))
    ));
    assert!(matches!(
        glue_ses(&up, &down, &unit(&f)),
        Err(Error::NotAPartition(_))
    ));
}

#[test]
fn family_mismatch_is_rejected() {
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let i = sub_on(&f, &["C2"]);
    assert_eq!(left_kan(&i, &unit(&f)), Err(Error::FamilyMismatch));
    assert_eq!(restrict(&i, &unit(&i.sub)), Err(Error::FamilyMismatch));
}

#[test]
fn oplax_comparison_on_a_gap() {
    // {1, C4} is neither up- nor down-closed in 1 < C2 < C4.
    let f = GroupFamily::cyclic_p(2, 2).unwrap();
    let i = sub_on(&f, &["1", "C4"]);
    let x = chi_from_outrep(&OutRep::trivial(&i.sub, 0, 1));
    let y = unit(&i.sub);
    let c = oplax_comparison(&i, &x, &y).unwrap();
    assert!(c.vanishes_on_sub(&i).unwrap());
}

fn random_inclusion(f: &Arc<GroupFamily>, rng: &mut impl Rng) -> Inclusion {
    let n = f.num_classes();
    let mask = rng.gen_range(1u32..(1 << n));
    let classes: BTreeSet<usize> = (0..n).filter(|c| mask >> c & 1 == 1).collect();
    full_subfamily(f, &classes, f.spec().clone()).unwrap().1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjunctions_hold((fi, seed) in (0..small_families().len(), any::<u64>())) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_inclusion(&f, &mut rng);
        let x = RepSampler::new(&i.sub, 2).sample(&mut rng);
        let y = RepSampler::new(&f, 2).sample(&mut rng);
        prop_assert!(left_kan_general(&i, &x).unwrap().is_valid());
        prop_assert!(right_kan_general(&i, &x).unwrap().is_valid());
        let report = adjunction_check(&i, &x, &y).unwrap();
        prop_assert!(report.holds(), "{:?}", report);
        // Both extensions restrict back to the original object.
        prop_assert!(iso(&restrict(&i, &left_kan(&i, &x).unwrap()).unwrap(), &x));
        prop_assert!(iso(&restrict(&i, &right_kan(&i, &x).unwrap()).unwrap(), &x));
    }

    #[test]
    fn gluing_is_exact((fi, seed) in (0..small_families().len(), any::<u64>())) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(0..=f.max_order());
        let down = truncate(&f, &Selection::OrderAtMost(n)).unwrap().1;
        let up = truncate(&f, &Selection::OrderAbove(n)).unwrap().1;
        let x = RepSampler::new(&f, 3).sample(&mut rng);
        let g = glue_ses(&down, &up, &x).unwrap();
        prop_assert!(g.report.is_exact());
    }

    #[test]
    fn oplax_kernel_and_cokernel_vanish_on_sub((fi, seed) in (0..small_families().len(), any::<u64>())) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_inclusion(&f, &mut rng);
        let s = RepSampler::new(&i.sub, 2);
        let c = oplax_comparison(&i, &s.sample(&mut rng), &s.sample(&mut rng)).unwrap();
        prop_assert!(c.vanishes_on_sub(&i).unwrap());
    }
}
