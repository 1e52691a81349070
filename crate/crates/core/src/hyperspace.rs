//! Finite subsets of a space under the Hausdorff metric, the induced map on
//! them, and membership tests for Vietoris and hit/miss open sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::spaces::{Ball, Point, Space, SpaceKind};

pub const DEFAULT_SET_CAP: usize = 1_000_000;

/// A nonempty finite set of points, deduplicated at the space tolerance and
/// stored in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HSet {
    points: Vec<Point>,
}

impl HSet {
    pub fn new(space: &Space, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("hyperspace elements are nonempty"));
        }
        for p in &points {
            space.check(p)?;
        }
        Ok(Self::canonical(space, points))
    }

    pub fn singleton(point: Point) -> Self {
        HSet {
            points: vec![point],
        }
    }

    /// Sorts and deduplicates points already known to belong to `space`.
    pub(crate) fn canonical(space: &Space, mut points: Vec<Point>) -> Self {
        points.sort_by(|a, b| a.canonical_cmp(b));
        let mut out: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            match out.last() {
                Some(last) if space.same_point(last, &p) => {}
                _ => out.push(p),
            }
        }
        if space.kind == SpaceKind::Circle && out.len() > 1 {
            let (first, last) = (&out[0], &out[out.len() - 1]);
            if space.same_point(first, last) {
                out.pop();
            }
        }
        HSet { points: out }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn union(&self, space: &Space, other: &HSet) -> HSet {
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        Self::canonical(space, pts)
    }

    /// Every point of `self` matches a point of `other` at the tolerance.
    pub fn is_subset(&self, space: &Space, other: &HSet) -> bool {
        self.points
            .iter()
            .all(|p| other.points.iter().any(|q| space.same_point(p, q)))
    }

    /// Set equality at the dedup tolerance.
    pub fn approx_eq(&self, space: &Space, other: &HSet) -> bool {
        self.len() == other.len() && self.is_subset(space, other) && other.is_subset(space, self)
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.max(a.distance_unchecked(b));
            }
        }
        best
    }
}

/// `max_{a in A} min_{b in B} d(a, b)`.
pub fn directed_distance(a: &HSet, b: &HSet) -> f64 {
    a.points
        .iter()
        .map(|p| {
            b.points
                .iter()
                .map(|q| p.distance_unchecked(q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

pub fn hausdorff_distance(space: &Space, a: &HSet, b: &HSet) -> Result<f64> {
    space.check(&a.points[0])?;
    space.check(&b.points[0])?;
    Ok(directed_distance(a, b).max(directed_distance(b, a)))
}

/// `F̄(A) = ⋃_i f_i(A)`.
pub fn induced_map(rel: &Relation, a: &HSet) -> Result<HSet> {
    induced_map_capped(rel, a, DEFAULT_SET_CAP)
}

pub fn induced_map_capped(rel: &Relation, a: &HSet, cap: usize) -> Result<HSet> {
    let k = rel.maps().len();
    let requested = (a.len() as u128) * (k as u128);
    if requested > cap as u128 {
        return Err(Error::Resource {
            what: "induced image",
            requested,
            cap,
        });
    }
    let mut out = Vec::with_capacity(a.len() * k);
    for p in &a.points {
        for m in rel.maps() {
            out.push(m.apply(rel.space(), p)?);
        }
    }
    Ok(HSet::canonical(rel.space(), out))
}

/// `[A, F̄(A), ..., F̄^N(A)]`.
pub fn induced_orbit(rel: &Relation, a: &HSet, steps: usize) -> Result<Vec<HSet>> {
    let mut orbit = Vec::with_capacity(steps + 1);
    orbit.push(a.clone());
    for _ in 0..steps {
        let next = induced_map(rel, orbit.last().expect("nonempty"))?;
        orbit.push(next);
    }
    Ok(orbit)
}

/// An open set of the base space: a ball, or the complement of a finite
/// union of balls (a miss-set complement).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OpenSetSpec {
    Ball(Ball),
    ComplementOfUnion { balls: Vec<Ball> },
}

impl OpenSetSpec {
    pub fn contains(&self, p: &Point) -> bool {
        match self {
            OpenSetSpec::Ball(b) => b.contains(p),
            OpenSetSpec::ComplementOfUnion { balls } => !balls.iter().any(|b| b.contains(p)),
        }
    }

    /// Lower bound on the distance from `p` to the complement of the set;
    /// positive exactly when a neighbourhood of `p` fits inside.
    fn margin(&self, p: &Point) -> f64 {
        match self {
            OpenSetSpec::Ball(b) => b.radius - b.center.distance_unchecked(p),
            OpenSetSpec::ComplementOfUnion { balls } => balls
                .iter()
                .map(|b| b.center.distance_unchecked(p) - b.radius)
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// `A ∈ ⟨U_1, ..., U_n⟩`: `A` lies in the union and meets every `U_i`.
pub fn vietoris_member(a: &HSet, us: &[OpenSetSpec]) -> Result<bool> {
    if us.is_empty() {
        return Err(Error::input("Vietoris sets need at least one open set"));
    }
    let covered = a.points.iter().all(|p| us.iter().any(|u| u.contains(p)));
    let meets = us.iter().all(|u| a.points.iter().any(|p| u.contains(p)));
    Ok(covered && meets)
}

/// `A ∈ E⁻`: `A` meets `E`.
pub fn hit_member(a: &HSet, e: &OpenSetSpec) -> bool {
    a.points.iter().any(|p| e.contains(p))
}

/// `A ∈ E⁺`: `A ⊆ E`.
pub fn plus_member(a: &HSet, e: &OpenSetSpec) -> bool {
    a.points.iter().all(|p| e.contains(p))
}

/// `A ∈ E⁺⁺`: some `S_ε(A)` fits inside `E`. For finite `A` this is a
/// positive distance from every point of `A` to the complement of `E`.
pub fn plusplus_member(space: &Space, a: &HSet, e: &OpenSetSpec) -> bool {
    a.points
        .iter()
        .all(|p| space.check(p).is_ok() && e.contains(p) && e.margin(p) > 0.0)
}
