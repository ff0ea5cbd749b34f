mod common;

use common::*;
use hnkit::parabolic::{character_generators, is_dominant_character, parabolic_from_flag, parabolic_leq, ParabolicIndex};
use hnkit::rootsys::{GroupFamily, RootSystem};
use hnkit::Q;
use num_traits::Zero;
use proptest::prelude::*;

fn subset_of(f: GroupFamily) -> impl Strategy<Value = ParabolicIndex> {
    let n = RootSystem::new(f).unwrap().simple().len();
    prop::collection::btree_set(0..n.max(1), 0..=n).prop_map(move |s| {
        ParabolicIndex::new(f, s.into_iter().filter(|&i| i < n)).unwrap()
    })
}

fn family() -> impl Strategy<Value = GroupFamily> {
    prop::sample::select(families_up_to(5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generators_are_dominant_characters((f, i) in family().prop_flat_map(|f| (Just(f), subset_of(f)))) {
        prop_assume!(!i.is_empty());
        let rs = RootSystem::new(f).unwrap();
        let gens = character_generators(f, &i).unwrap();
        prop_assert_eq!(gens.len(), i.members().len());
        for (chi, &alpha) in gens.iter().zip(i.members()) {
            let check = is_dominant_character(f, &i, chi).unwrap();
            prop_assert!(check.dominant);
            let coeffs = check.coefficients.unwrap();
            prop_assert!(coeffs[alpha] > Q::zero());
            for &beta in i.members() {
                if beta != alpha {
                    prop_assert!(coeffs[beta].is_zero());
                }
            }
            for r in rs.levi_roots(&i) {
                prop_assert!(chi.eval(&rs.coroot(&r).unwrap()).is_zero());
            }
        }
    }

    #[test]
    fn order_is_reverse_inclusion((f, i, j) in family().prop_flat_map(|f| (Just(f), subset_of(f), subset_of(f)))) {
        prop_assert_eq!(parabolic_leq(&i, &j).unwrap(), i.members().is_superset(j.members()));
        let rs = RootSystem::new(f).unwrap();
        let (pi, pj) = (rs.parabolic_roots(&i), rs.parabolic_roots(&j));
        if parabolic_leq(&i, &j).unwrap() {
            prop_assert!(pi.iter().all(|r| pj.contains(r)));
        }
    }

    #[test]
    fn levi_and_parabolic_roots_nest((f, i) in family().prop_flat_map(|f| (Just(f), subset_of(f)))) {
        let rs = RootSystem::new(f).unwrap();
        let levi = rs.levi_roots(&i);
        let par = rs.parabolic_roots(&i);
        prop_assert!(levi.iter().all(|r| par.contains(r) && par.contains(&r.neg())));
        prop_assert_eq!(par.len() * 2 - levi.len(), rs.roots().len());
    }

    #[test]
    fn flags_of_gl_match_simple_indices(r in 2usize..9, mask in 0u32..256) {
        let ranks: Vec<usize> = (1..r).filter(|l| mask >> l & 1 == 1).collect();
        let i = parabolic_from_flag(GroupFamily::gl(r), &ranks).unwrap();
        prop_assert_eq!(i.members().iter().map(|k| k + 1).collect::<Vec<_>>(), ranks);
    }
}
