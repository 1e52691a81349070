//! Sensitive dependence of the induced map `F̄` on `K(X)`.

use serde_json::json;

use super::periodic::sample_points;
use super::{timed, Bounds, Certificate, CheckerName, Outcome, Separation, Verdict, Witness};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, induced_map_capped, HSet};
use crate::relation::Relation;
use crate::spaces::{BiSeq, Point};

const ORBIT_SET_CAP: usize = 10_000;

/// Complement of every symbol after index `last`.
pub(crate) fn flip_tail_after(x: &BiSeq, last: i64) -> BiSeq {
    let lo = x.offset().min(last + 1);
    let hi = x.end().max(last + 1);
    let core: Vec<u8> = (lo..hi)
        .map(|i| if i > last { 1 - x.get(i) } else { x.get(i) })
        .collect();
    BiSeq::new(x.left(), core, 1 - x.right(), lo).expect("binary symbols")
}

/// Nearby variants of one point, each at distance below `eps`.
fn point_variants(p: &Point, eps: f64) -> Vec<Point> {
    match p {
        Point::Circle(t) => vec![Point::Circle(t + eps / 2.0), Point::Circle(t - eps / 2.0)],
        Point::Interval(t) => [t + eps / 2.0, t - eps / 2.0]
            .into_iter()
            .filter(|s| (0.0..=1.0).contains(s))
            .map(Point::Interval)
            .collect(),
        Point::Sigma2(x) => {
            // the tail after index m weighs at most 2^{-m}
            let mut r = 0i64;
            while 2f64.powi(-(r as i32)) >= eps && r < 60 {
                r += 1;
            }
            let mut out = Vec::new();
            for m in r + 1..=r + 4 {
                out.push(Point::Sigma2(flip_tail_after(x, m)));
                out.push(Point::Sigma2(x.with_tail_after(m, 0)));
                out.push(Point::Sigma2(x.with_tail_after(m, 1)));
            }
            out
        }
    }
}

fn perturbations(rel: &Relation, seed: &HSet, eps: f64) -> Result<Vec<HSet>> {
    let space = rel.space();
    let pts = seed.points();
    let mut out = Vec::new();
    let per_point: Vec<Vec<Point>> = pts
        .iter()
        .map(|p| match rel.table_net() {
            // table systems only move between net points
            Some(net) => net
                .points_within(p, eps)
                .into_iter()
                .map(|j| net.point(j))
                .filter(|q| !space.same_point(p, q))
                .collect(),
            None => point_variants(p, eps)
                .into_iter()
                .map(|q| match q {
                    Point::Circle(t) => Point::circle(t).expect("finite angle"),
                    q => q,
                })
                .collect(),
        })
        .collect();
    let variants = per_point.iter().map(Vec::len).min().unwrap_or(0);
    // move every point the same way
    for v in 0..variants {
        let moved: Vec<Point> = per_point.iter().map(|vs| vs[v].clone()).collect();
        out.push(HSet::new(space, moved)?);
    }
    // move one point
    for (j, vs) in per_point.iter().enumerate() {
        for q in vs {
            let mut moved = pts.to_vec();
            moved[j] = q.clone();
            out.push(HSet::new(space, moved)?);
        }
    }
    let mut kept = Vec::new();
    for b in out {
        let d = hausdorff_distance(space, seed, &b)?;
        if d > 0.0 && d < eps {
            kept.push(b);
        }
    }
    Ok(kept)
}

/// First `n <= n_max` with `d_H(F̄^n(A), F̄^n(B)) > delta`, with that distance.
fn separation_level(
    rel: &Relation,
    a: &HSet,
    b: &HSet,
    delta: f64,
    n_max: usize,
) -> Result<Option<(usize, f64)>> {
    let (mut fa, mut fb) = (a.clone(), b.clone());
    for n in 1..=n_max {
        fa = match induced_map_capped(rel, &fa, ORBIT_SET_CAP) {
            Ok(s) => s,
            Err(e) if e.is_resource() => return Ok(None),
            Err(e) => return Err(e),
        };
        fb = match induced_map_capped(rel, &fb, ORBIT_SET_CAP) {
            Ok(s) => s,
            Err(e) if e.is_resource() => return Ok(None),
            Err(e) => return Err(e),
        };
        let d = hausdorff_distance(rel.space(), &fa, &fb)?;
        if d > delta {
            return Ok(Some((n, d)));
        }
    }
    Ok(None)
}

fn default_seeds(rel: &Relation, bounds: &Bounds) -> Result<Vec<HSet>> {
    let mut points = sample_points(rel, bounds)?;
    if points.len() > 32 {
        let stride = points.len().div_ceil(32);
        points = points.into_iter().step_by(stride).collect();
    }
    let mut seeds: Vec<HSet> = points.iter().map(|p| HSet::singleton(p.clone())).collect();
    if points.len() >= 3 {
        let trio = vec![
            points[0].clone(),
            points[points.len() / 3].clone(),
            points[2 * points.len() / 3].clone(),
        ];
        seeds.push(HSet::new(rel.space(), trio)?);
    }
    Ok(seeds)
}

/// Each seed `A` has some `B` with `d_H(A, B) < net_eps` whose induced
/// orbit separates from that of `A` by more than `delta` within `n_max`.
pub fn check_sensitivity_induced(
    rel: &Relation,
    delta: f64,
    bounds: &Bounds,
    seeds: &[HSet],
) -> Result<Verdict> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::input(format!("delta must be positive, got {delta}")));
    }
    let params = json!({ "delta": delta });
    timed(CheckerName::SensitivityInduced, bounds, Some(params), || {
        if rel.maps().iter().all(|m| m.is_isometry()) {
            return Ok(Outcome::refuted(Witness::Refutation {
                cover: None,
                certificate: Certificate::Isometry,
            }));
        }
        let seeds = if seeds.is_empty() {
            default_seeds(rel, bounds)?
        } else {
            seeds.to_vec()
        };
        let space = rel.space();
        let mut entries = Vec::with_capacity(seeds.len());
        'seeds: for seed in &seeds {
            for p in seed.points() {
                space.check(p)?;
            }
            for b in perturbations(rel, seed, bounds.net_eps())? {
                if let Some((n, sep)) = separation_level(rel, seed, &b, delta, bounds.n_max)? {
                    entries.push(Separation {
                        seed: seed.clone(),
                        initial_distance: hausdorff_distance(space, seed, &b)?,
                        perturbed: b,
                        n,
                        separation: sep,
                    });
                    continue 'seeds;
                }
            }
            return Ok(Outcome::inconclusive(Some(Witness::Unsettled {
                note: format!("no separating perturbation for a seed of {} points", seed.len()),
            })));
        }
        Ok(Outcome::confirmed(Witness::Separations { entries }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flipped_tail_differs_exactly_after_the_cut() {
        let x = BiSeq::new(0, vec![1, 0, 1], 0, -1).unwrap();
        let y = flip_tail_after(&x, 0);
        for i in -5..=0 {
            assert_eq!(x.get(i), y.get(i));
        }
        for i in 1..10 {
            assert_eq!(x.get(i), 1 - y.get(i));
        }
        // sum_{i >= 1} 2^{-i}
        assert!((x.distance(&y) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma2_variants_stay_close() {
        let x = BiSeq::new(1, vec![0, 1, 1, 0], 0, -2).unwrap();
        for eps in [0.5, 0.1, 0.02] {
            for v in point_variants(&Point::Sigma2(x.clone()), eps) {
                let Point::Sigma2(y) = v else { unreachable!() };
                assert!(x.distance(&y) < eps);
            }
        }
    }
}
