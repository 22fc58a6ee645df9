use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_morphism, small_families, RepSampler};
use super::*;
use crate::family::{up_closure, GroupFamily};

fn c22() -> Arc<GroupFamily> {
    GroupFamily::cyclic_p(2, 2).unwrap()
}

#[test]
fn unit_and_constructed_objects_validate() {
    for f in small_families() {
        assert!(unit(&f).is_valid());
        for g in 0..f.num_classes() {
            assert!(e_rep(&OutRep::regular(&f, g)).unwrap().is_valid());
            assert!(e_g(&f, g).is_valid());
            assert!(chi_rep(&OutRep::regular(&f, g)).unwrap().0.is_valid());
        }
    }
}

#[test]
fn zeroed_identity_is_reported() {
    let f = c22();
    let x = unit(&f);
    let c4 = f.class_index("C4").unwrap();
    let mut transitions = x.transitions().to_vec();
    transitions[f.identity(c4)] = RationalMatrix::zeros(1, 1);
    let broken = Rep::from_parts(f.clone(), x.dims().to_vec(), transitions).unwrap();
    let violations = broken.validate();
    assert!(!violations.is_empty());
    assert!(Rep::new(f, x.dims().to_vec(), broken.transitions().to_vec()).is_err());
}

#[test]
fn e_of_c2_dims() {
    let f = c22();
    let c2 = f.class_index("C2").unwrap();
    assert_eq!(e_g(&f, c2).dims(), &[0, 1, 1]);
    assert_eq!(e_rep(&OutRep::regular(&f, c2)).unwrap().dims(), &[0, 1, 1]);
}

#[test]
fn e_regular_matches_direct_construction() {
    for f in small_families() {
        for g in 0..f.num_classes() {
            let a = e_rep(&OutRep::regular(&f, g)).unwrap();
            let b = e_g(&f, g);
            assert!(
                is_isomorphic(&a, &b).unwrap().is_some(),
                "{} at {}",
                f.name(),
                f.label(g)
            );
        }
    }
}

#[test]
fn unit_is_e_of_trivial_group() {
    for f in small_families() {
        if let Ok(one) = f.class_index("1") {
            assert!(is_isomorphic(&unit(&f), &e_g(&f, one)).unwrap().is_some());
        }
    }
}

#[test]
fn e_at_maximal_class_is_concentrated() {
    let f = GroupFamily::cyclic_p(2, 3).unwrap();
    let top = f.class_index("C8").unwrap();
    let e = e_trivial(&f, top).unwrap();
    let chi = chi_from_outrep(&OutRep::trivial(&f, top, 1));
    assert!(is_isomorphic(&e, &chi).unwrap().is_some());
}

#[test]
fn chi_kernel_over_cyclic_2_2() {
    let f = c22();
    let c2 = f.class_index("C2").unwrap();
    let (chi, epi) = chi_rep(&OutRep::trivial(&f, c2, 1)).unwrap();
    assert_eq!(chi.dims(), &[0, 1, 0]);
    let (k, mono) = kernel(&epi).unwrap();
    assert_eq!(k.dims(), &[0, 0, 1]);
    assert!(ShortExactSequence::new(mono, epi)
        .unwrap()
        .verify()
        .is_exact());
}

#[test]
fn hom_examples() {
    let f = c22();
    let one = unit(&f);
    assert_eq!(hom_space(&one, &one, None).unwrap().len(), 1);
    let a = chi_from_outrep(&OutRep::trivial(&f, 1, 1));
    let b = chi_from_outrep(&OutRep::trivial(&f, 2, 1));
    assert!(hom_space(&a, &b, None).unwrap().is_empty());
    assert!(matches!(
        hom_space(&one, &one, Some(0)),
        Err(Error::BudgetExceeded(_))
    ));
}

#[test]
fn kernel_of_identity_is_zero() {
    let f = c22();
    let x = e_g(&f, 1);
    assert!(kernel(&RepMorphism::identity(&x)).unwrap().0.is_zero());
}

#[test]
fn unit_generated_by_bottom_element() {
    let f = GroupFamily::cyclic_p(2, 3).unwrap();
    let one = unit(&f);
    let (sub, _) = subrep_generated(&one, &[(0, vec![q(1)])]).unwrap();
    assert_eq!(sub.dims(), one.dims());
}

#[test]
fn epi_from_projectives_for_unit_on_two_classes() {
    let f = GroupFamily::cyclic_p(2, 1).unwrap();
    let epi = epi_from_projectives(&unit(&f)).unwrap();
    assert!(epi.is_epi());
    // e_1 ⊕ e_{C2} has dims (1, 2 + 1).
    assert_eq!(epi.source().dims(), &[1, 2]);
}

#[test]
fn gamma_examples() {
    let f = GroupFamily::cyclic_p(2, 5).unwrap();
    for i in 0..6 {
        let g = gamma_rep(&f, i).unwrap();
        let expected: Vec<usize> = (0..6).map(|l| usize::from(l != i)).collect();
        assert_eq!(g.dims(), expected.as_slice());
        let bound = check_eventually_torsion_free(&g).unwrap();
        assert_eq!(bound.r(), i.saturating_sub(1), "gamma_{i}");
        if i > 0 {
            let (below, _) = subrep_generated(&g, &[(0, vec![q(1)])]).unwrap();
            let expected: Vec<usize> = (0..6).map(|l| usize::from(l < i)).collect();
            assert_eq!(below.dims(), expected.as_slice());
        }
        if i > 0 && i + 1 < 6 {
            let (both, _) = subrep_generated(&g, &[(0, vec![q(1)]), (i + 1, vec![q(1)])]).unwrap();
            assert_eq!(both.dims(), g.dims());
        }
    }
    for i in 0..6 {
        for j in 0..6 {
            let t = tensor(&gamma_rep(&f, i).unwrap(), &gamma_rep(&f, j).unwrap()).unwrap();
            let expected: BTreeSet<usize> = (0..6).filter(|l| *l != i && *l != j).collect();
            assert_eq!(t.support_set(), expected);
        }
    }
}

#[test]
fn gamma_on_elementary_abelian() {
    let f = GroupFamily::elementary_abelian(2, 3).unwrap();
    for i in 0..4 {
        assert!(gamma_rep(&f, i).unwrap().is_valid());
    }
}

#[test]
fn torsion_free_bounds() {
    let f = GroupFamily::cyclic_p(3, 4).unwrap();
    assert_eq!(check_eventually_torsion_free(&unit(&f)).unwrap().r(), 0);
    for i in 0..3 {
        let chi = chi_from_outrep(&OutRep::trivial(&f, i, 1));
        let b = check_eventually_torsion_free(&chi).unwrap();
        assert_eq!(b.r(), i);
        assert!(b.is_certified());
    }
    let top = chi_from_outrep(&OutRep::trivial(&f, 3, 1));
    assert!(!check_eventually_torsion_free(&top).unwrap().is_certified());
}

#[test]
fn gamma_rejects_non_n_stable_family() {
    let f = GroupFamily::abelian_p(2, 8).unwrap();
    assert!(matches!(gamma_rep(&f, 0), Err(Error::NotNStable(_))));
}

#[test]
fn json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for f in small_families() {
        let s = RepSampler::new(&f, 3);
        for _ in 0..5 {
            let x = s.sample(&mut rng);
            let y = read_rep(&write_rep(&x)).unwrap();
            assert_eq!(x, y);
        }
    }
}

#[test]
fn out_rep_rejects_non_action() {
    let f = c22();
    let c4 = f.class_index("C4").unwrap();
    let bad = vec![RationalMatrix::from_i64(1, 1, &[2]); 2];
    assert!(OutRep::new(f, c4, 1, bad).is_err());
}

fn family_and_seed() -> impl Strategy<Value = (usize, u64)> {
    (0..small_families().len(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampled_objects_are_valid((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = RepSampler::new(&f, 3).sample(&mut rng);
        prop_assert!(x.is_valid());
    }

    #[test]
    fn support_axioms((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = RepSampler::new(&f, 3);
        let (x, y) = (s.sample(&mut rng), s.sample(&mut rng));
        prop_assert_eq!(unit(&f).support_set(), f.all_classes());
        prop_assert!(Rep::zero(&f).support_set().is_empty());
        let sum: BTreeSet<_> = x.support_set().union(&y.support_set()).copied().collect();
        prop_assert_eq!(dsum(&x, &y).unwrap().support_set(), sum);
        let meet: BTreeSet<_> = x.support_set().intersection(&y.support_set()).copied().collect();
        prop_assert_eq!(tensor(&x, &y).unwrap().support_set(), meet);
    }

    #[test]
    fn kernel_cokernel_sequences_are_exact((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = RepSampler::new(&f, 3);
        let (x, y) = (s.sample(&mut rng), s.sample(&mut rng));
        let h = random_morphism(&x, &y, &mut rng);
        let (k, mono) = kernel(&h).unwrap();
        let im = image(&h).unwrap();
        let composite = im.mono.compose(&im.epi).unwrap();
        prop_assert_eq!(composite.components(), h.components());
        let ses = ShortExactSequence::new(mono, im.epi.clone()).unwrap();
        prop_assert!(ses.verify().is_exact());
        prop_assert!(k.is_valid());
        let union: BTreeSet<_> = ses.sub().support_set().union(&ses.quotient().support_set()).copied().collect();
        prop_assert_eq!(ses.middle().support_set(), union);
        let (c, _) = cokernel(&h).unwrap();
        prop_assert!(c.is_valid());
    }

    #[test]
    fn evaluation_adjunction_dims((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = RepSampler::new(&f, 3).sample(&mut rng);
        for g in 0..f.num_classes() {
            prop_assert_eq!(hom_space(&e_g(&f, g), &x, None).unwrap().len(), x.dim(g));
        }
    }

    #[test]
    fn tensoring_preserves_monos((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = RepSampler::new(&f, 3);
        let m = s.sample_mono(&mut rng);
        let x = s.sample(&mut rng);
        let t = tensor_morphisms(&m, &RepMorphism::identity(&x)).unwrap();
        prop_assert!(t.is_mono());
    }

    #[test]
    fn e_supports_are_upward_closures((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = RepSampler::new(&f, 3);
        for g in 0..f.num_classes() {
            let up = up_closure(&f, &[g].into_iter().collect()).unwrap();
            prop_assert_eq!(e_g(&f, g).support_set(), up.clone());
            let v = super::random::random_outrep(&s, g, &mut rng);
            prop_assert_eq!(e_rep(&v).unwrap().support_set(), up);
            prop_assert_eq!(chi_rep(&v).unwrap().0.support_set(), [g].into_iter().collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn tensor_unit_law((fi, seed) in family_and_seed()) {
        let f = small_families().swap_remove(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = RepSampler::new(&f, 3).sample(&mut rng);
        let t = tensor(&unit(&f), &x).unwrap();
        prop_assert!(is_isomorphic(&t, &x).unwrap().is_some());
    }
}
