mod common;

use common::*;
use proptest::prelude::*;
use setdyn::spaces::{Space, SpaceKind};

fn family_with_sets() -> impl Strategy<Value = (setdyn::relation::Relation, setdyn::hyperspace::HSet, setdyn::hyperspace::HSet)> {
    arb_family().prop_flat_map(|r| {
        let s = arb_hset_for(&r, 4);
        (Just(r), s.clone(), s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn induced_map_is_monotone((rel, a, c) in family_with_sets()) {
        prop_monotone(&rel, &a, &c)?;
    }

    #[test]
    fn induced_map_distributes_over_unions((rel, a, b) in family_with_sets()) {
        prop_union_distributes(&rel, &a, &b)?;
    }

    #[test]
    fn union_contracts((rel, a, b) in family_with_sets()) {
        prop_union_contraction(&rel, &a, &b)?;
    }

    #[test]
    fn rotation_components_preserve_hausdorff_distance(
        (rel, a, b) in prop::sample::select(rotation_families()).prop_flat_map(|r| {
            let s = arb_hset_for(&r, 4);
            (Just(r), s.clone(), s)
        })
    ) {
        prop_isometric_components(&rel, &a, &b)?;
    }

    #[test]
    fn strong_containment_implies_containment(
        (kind, a, e) in prop::sample::select(vec![SpaceKind::Circle, SpaceKind::Interval, SpaceKind::Sigma2])
            .prop_flat_map(|k| (Just(k), arb_hset(k, 4), arb_open_set(k)))
    ) {
        prop_plusplus_implies_plus(Space::new(kind), &a, &e)?;
    }
}

/// Cardinalities of the orbit of `{0}` under the rational pair, N = 10,
/// frozen from the bitmask oracle below.
const RATIONAL_ORBIT_CARDINALITIES: [usize; 11] = [1, 2, 3, 4, 4, 4, 4, 4, 4, 4, 4];

#[test]
fn rational_orbit_of_zero_matches_the_bitmask_oracle() {
    use setdyn::hyperspace::{induced_orbit, HSet};
    let mut mask = 1u32;
    let mut oracle = vec![1];
    for _ in 0..10 {
        mask = (0..8)
            .filter(|j| mask >> j & 1 == 1)
            .fold(0, |acc, j| acc | 1 << ((j + 1) % 8) | 1 << ((j + 3) % 8));
        oracle.push(mask.count_ones() as usize);
    }
    assert_eq!(oracle, RATIONAL_ORBIT_CARDINALITIES);

    let rel = setdyn::experiments::rational_pair();
    let orbit = induced_orbit(&rel, &HSet::singleton(setdyn::spaces::Point::Circle(0.0)), 10).unwrap();
    let got: Vec<usize> = orbit.iter().map(HSet::len).collect();
    assert_eq!(got, RATIONAL_ORBIT_CARDINALITIES);
}
