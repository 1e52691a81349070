#![allow(dead_code)]

use std::f64::consts::TAU;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use setdyn::checkers::*;
use setdyn::experiments::builtin_families;
use setdyn::hyperspace::{
    hausdorff_distance, induced_map, plus_member, plusplus_member, HSet, OpenSetSpec,
};
use setdyn::relation::{MapDescriptor, Relation};
use setdyn::spaces::{Ball, BiSeq, Point, Space, SpaceKind};

pub fn arb_biseq() -> impl Strategy<Value = BiSeq> {
    (
        0u8..=1,
        prop::collection::vec(0u8..=1, 0..10),
        0u8..=1,
        -8i64..8,
    )
        .prop_map(|(l, core, r, off)| BiSeq::new(l, core, r, off).unwrap())
}

pub fn arb_point(kind: SpaceKind) -> BoxedStrategy<Point> {
    match kind {
        SpaceKind::Circle => (0.0..TAU).prop_map(|t| Point::circle(t).unwrap()).boxed(),
        SpaceKind::Interval => prop_oneof![
            4 => (0.0..=1.0f64).prop_map(|t| Point::interval(t).unwrap()),
            1 => prop::sample::select(vec![0.0, 0.5, 1.0]).prop_map(|t| Point::interval(t).unwrap()),
        ]
        .boxed(),
        SpaceKind::Sigma2 => arb_biseq().prop_map(Point::Sigma2).boxed(),
    }
}

pub fn arb_hset(kind: SpaceKind, max: usize) -> BoxedStrategy<HSet> {
    prop::collection::vec(arb_point(kind), 1..=max)
        .prop_map(move |pts| HSet::new(&Space::new(kind), pts).unwrap())
        .boxed()
}

/// Points a family can act on: net points for table systems.
pub fn arb_point_for(rel: &Relation) -> BoxedStrategy<Point> {
    match rel.table_net() {
        Some(net) => {
            let n = net.size() as usize;
            (0..n).prop_map(move |j| net.point(j)).boxed()
        }
        None => arb_point(rel.space().kind),
    }
}

pub fn arb_hset_for(rel: &Relation, max: usize) -> BoxedStrategy<HSet> {
    let space = *rel.space();
    prop::collection::vec(arb_point_for(rel), 1..=max)
        .prop_map(move |pts| HSet::new(&space, pts).unwrap())
        .boxed()
}

pub fn families() -> Vec<(&'static str, Relation)> {
    builtin_families()
}

pub fn arb_family() -> impl Strategy<Value = Relation> {
    let fams: Vec<Relation> = families().into_iter().map(|(_, r)| r).collect();
    prop::sample::select(fams)
}

pub fn rotation_families() -> Vec<Relation> {
    families()
        .into_iter()
        .map(|(_, r)| r)
        .filter(|r| r.maps().iter().all(|m| matches!(m, MapDescriptor::Rotation { .. })))
        .collect()
}

pub fn set_eq(space: &Space, a: &HSet, b: &HSet) -> bool {
    a.approx_eq(space, b)
}

/// `sum_{|i| <= 60} 2^{-|i|} |a_i - b_i|`, term by term.
pub fn truncated_distance(a: &BiSeq, b: &BiSeq) -> f64 {
    (-60i64..=60)
        .map(|i| {
            if a.get(i) != b.get(i) {
                2f64.powi(-(i.abs() as i32))
            } else {
                0.0
            }
        })
        .sum()
}

// ---- properties shared by the proptest suites and the acceptance run ----

pub fn prop_metric_axioms(space: Space, a: Point, b: Point, c: Point) -> Result<(), TestCaseError> {
    let d = |x: &Point, y: &Point| space.distance(x, y).unwrap();
    prop_assert_eq!(d(&a, &b), d(&b, &a));
    prop_assert_eq!(d(&a, &a), 0.0);
    prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    prop_assert!(d(&a, &b) <= space.diameter() + 1e-12);
    let zero = match space.kind {
        SpaceKind::Sigma2 => d(&a, &b) == 0.0,
        _ => d(&a, &b) <= space.dedup_tolerance,
    };
    prop_assert_eq!(zero, space.same_point(&a, &b));
    Ok(())
}

pub fn prop_sigma2_closed_form(a: BiSeq, b: BiSeq) -> Result<(), TestCaseError> {
    prop_assert!((a.distance(&b) - truncated_distance(&a, &b)).abs() <= 1e-12);
    Ok(())
}

pub fn prop_hausdorff_axioms(space: Space, a: HSet, b: HSet, c: HSet) -> Result<(), TestCaseError> {
    let d = |x: &HSet, y: &HSet| hausdorff_distance(&space, x, y).unwrap();
    prop_assert_eq!(d(&a, &b), d(&b, &a));
    prop_assert!(d(&a, &a) <= space.dedup_tolerance);
    prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    Ok(())
}

pub fn prop_singleton(space: Space, x: Point, y: Point) -> Result<(), TestCaseError> {
    let dh = hausdorff_distance(&space, &HSet::singleton(x.clone()), &HSet::singleton(y.clone()))
        .unwrap();
    prop_assert!((dh - space.distance(&x, &y).unwrap()).abs() <= 1e-12);
    Ok(())
}

pub fn prop_semigroup(rel: &Relation, x: &Point, n: usize, m: usize) -> Result<(), TestCaseError> {
    let space = rel.space();
    let whole = rel.n_fold_image(n + m, x).unwrap();
    let mut pts = Vec::new();
    for y in rel.n_fold_image(n, x).unwrap().points() {
        pts.extend(rel.n_fold_image(m, y).unwrap().points().iter().cloned());
    }
    let split = HSet::new(space, pts).unwrap();
    prop_assert!(set_eq(space, &whole, &split), "n = {}, m = {}", n, m);
    Ok(())
}

pub fn prop_word_oracle(rel: &Relation, x: &Point, n: usize) -> Result<(), TestCaseError> {
    let space = rel.space();
    let words = rel.enumerate_words(n).unwrap();
    let pts = words.iter().map(|w| w.apply(rel, x).unwrap()).collect();
    let by_words = HSet::new(space, pts).unwrap();
    let direct = rel.n_fold_image(n, x).unwrap();
    prop_assert!(set_eq(space, &direct, &by_words), "n = {}", n);
    Ok(())
}

pub fn prop_monotone(rel: &Relation, a: &HSet, c: &HSet) -> Result<(), TestCaseError> {
    let space = rel.space();
    let b = a.union(space, c);
    let fa = induced_map(rel, a).unwrap();
    let fb = induced_map(rel, &b).unwrap();
    prop_assert!(fa.is_subset(space, &fb));
    Ok(())
}

pub fn prop_union_distributes(rel: &Relation, a: &HSet, b: &HSet) -> Result<(), TestCaseError> {
    let space = rel.space();
    let lhs = induced_map(rel, &a.union(space, b)).unwrap();
    let rhs = induced_map(rel, a).unwrap().union(space, &induced_map(rel, b).unwrap());
    prop_assert!(set_eq(space, &lhs, &rhs));
    Ok(())
}

fn component(rel: &Relation, i: usize, a: &HSet) -> HSet {
    let pts = a.points().iter().map(|p| rel.apply(i, p).unwrap()).collect();
    HSet::new(rel.space(), pts).unwrap()
}

pub fn prop_union_contraction(rel: &Relation, a: &HSet, b: &HSet) -> Result<(), TestCaseError> {
    let space = rel.space();
    let whole = hausdorff_distance(space, &induced_map(rel, a).unwrap(), &induced_map(rel, b).unwrap())
        .unwrap();
    let parts = (0..rel.k())
        .map(|i| hausdorff_distance(space, &component(rel, i, a), &component(rel, i, b)).unwrap())
        .fold(0.0, f64::max);
    prop_assert!(whole <= parts + 1e-12, "{} > {}", whole, parts);
    Ok(())
}

pub fn prop_isometric_components(rel: &Relation, a: &HSet, b: &HSet) -> Result<(), TestCaseError> {
    let space = rel.space();
    let d = hausdorff_distance(space, a, b).unwrap();
    for i in 0..rel.k() {
        let di = hausdorff_distance(space, &component(rel, i, a), &component(rel, i, b)).unwrap();
        prop_assert!((di - d).abs() <= 1e-12, "map {}: {} vs {}", i, di, d);
    }
    Ok(())
}

pub fn prop_isometric_words(rel: &Relation, x: &Point, y: &Point, n: usize) -> Result<(), TestCaseError> {
    let space = rel.space();
    let d = space.distance(x, y).unwrap();
    for w in rel.enumerate_words(n).unwrap() {
        let dw = space
            .distance(&w.apply(rel, x).unwrap(), &w.apply(rel, y).unwrap())
            .unwrap();
        prop_assert!((dw - d).abs() <= 1e-12);
    }
    Ok(())
}

pub fn prop_plusplus_implies_plus(space: Space, a: &HSet, e: &OpenSetSpec) -> Result<(), TestCaseError> {
    if plusplus_member(&space, a, e) {
        prop_assert!(plus_member(a, e));
    }
    Ok(())
}

pub fn arb_open_set(kind: SpaceKind) -> BoxedStrategy<OpenSetSpec> {
    let ball = (arb_point(kind), 0.01..2.0f64).prop_map(|(c, r)| Ball::new(c, r).unwrap());
    prop_oneof![
        ball.clone().prop_map(OpenSetSpec::Ball),
        prop::collection::vec(ball, 1..4).prop_map(|balls| OpenSetSpec::ComplementOfUnion { balls }),
    ]
    .boxed()
}

/// Families cheap enough to run every checker on.
pub fn chain_families() -> Vec<Relation> {
    let circle = Space::circle();
    let sigma2 = Space::sigma2();
    let mut out: Vec<Relation> = families()
        .into_iter()
        .map(|(_, r)| r)
        .filter(|r| r.translations().is_some() || r.table_net().is_some())
        .collect();
    out.push(Relation::new(circle, vec![MapDescriptor::rotation(0.0)]).unwrap());
    out.push(Relation::new(circle, vec![MapDescriptor::TableMap { table: (0..6).collect() }]).unwrap());
    out.push(Relation::new(sigma2, vec![MapDescriptor::shift(1)]).unwrap());
    out
}

pub fn arb_chain_case() -> impl Strategy<Value = (Relation, Bounds)> {
    (prop::sample::select(chain_families()), 1usize..=40, 0.5..2.0f64, 1u32..=2).prop_map(
        |(rel, n_max, cover_eps, window)| {
            let b = Bounds::default().with_n_max(n_max).with_cover_eps(cover_eps);
            let b = if rel.space().kind == SpaceKind::Sigma2 { b.with_window(window) } else { b };
            (rel, b)
        },
    )
}

fn confirmed(v: setdyn::Result<Verdict>) -> Result<bool, TestCaseError> {
    match v {
        Ok(v) => Ok(v.is_confirmed()),
        Err(e) if e.is_resource() => Ok(false),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

/// super-topological mixing ⇒ super-weak mixing ⇒ super-transitivity, and
/// the same chain for the base relation.
pub fn prop_implication_chain(rel: &Relation, bounds: &Bounds) -> Result<(), TestCaseError> {
    let sup = [
        confirmed(check_super_topological_mixing(rel, bounds))?,
        confirmed(check_super_weak_mixing(rel, bounds))?,
        confirmed(check_super_transitivity(rel, bounds))?,
    ];
    let base = [
        confirmed(check_topological_mixing(rel, bounds))?,
        confirmed(check_weak_mixing(rel, bounds))?,
        confirmed(check_transitivity(rel, bounds))?,
    ];
    for c in [sup, base] {
        prop_assert!(!c[0] || c[1], "{:?}", c);
        prop_assert!(!c[1] || c[2], "{:?}", c);
    }
    Ok(())
}
