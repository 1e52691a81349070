//! Independent re-evaluation of verdict witnesses and certificates.

use std::collections::HashSet;

use super::engine::{Engine, Fact, MARGIN};
use super::lemma::stage_certificate;
use super::pairs::mixing_threshold;
use super::periodic::{min_return, periodic_set_census};
use super::{
    Bounds, Certificate, CheckerName, LevelHit, PairEvidence, Status, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, induced_map, HSet};
use crate::relation::{Relation, Translations};
use crate::spaces::BallCover;

use super::reach::ReachGraph;

/// `hit.x ∈ U` and one length-`n` image of it lies in `V`.
pub(crate) fn check_hit(rel: &Relation, cover: &BallCover, u: usize, v: usize, hit: &LevelHit) -> bool {
    if u >= cover.len() || v >= cover.len() || hit.n == 0 {
        return false;
    }
    let (bu, bv) = (cover.ball(u), cover.ball(v));
    if !bu.contains(&hit.x) {
        return false;
    }
    match &hit.word {
        Some(w) => w.len() == hit.n && w.apply(rel, &hit.x).is_ok_and(|y| bv.contains(&y)),
        None => rel
            .n_fold_image(hit.n, &hit.x)
            .is_ok_and(|s| s.points().iter().any(|y| bv.contains(y))),
    }
}

/// `hit.x ∈ U` and all of `F^n(hit.x)` lies in `V`.
pub(crate) fn check_contain(
    rel: &Relation,
    cover: &BallCover,
    u: usize,
    v: usize,
    hit: &LevelHit,
) -> bool {
    if u >= cover.len() || v >= cover.len() || hit.n == 0 {
        return false;
    }
    let (bu, bv) = (cover.ball(u), cover.ball(v));
    bu.contains(&hit.x)
        && rel
            .n_fold_image(hit.n, &hit.x)
            .is_ok_and(|s| s.points().iter().all(|y| bv.contains(y)))
}

/// Re-checks the claim behind a verdict. Confirmed verdicts must carry a
/// witness that replays; refuted verdicts must carry a certificate that
/// recomputes. Inconclusive verdicts claim nothing and always pass.
pub fn replay(rel: &Relation, verdict: &Verdict) -> Result<bool> {
    let witness = match (&verdict.status, &verdict.witness) {
        (Status::Inconclusive, _) => return Ok(true),
        (_, None) => return Ok(false),
        (_, Some(w)) => w,
    };
    match verdict.status {
        Status::ConfirmedWithinBounds => replay_confirmed(rel, verdict, witness),
        Status::RefutedWithinBounds => match witness {
            Witness::Refutation { cover, certificate } => {
                replay_certificate(rel, &verdict.bounds, cover.as_ref(), certificate)
            }
            _ => Ok(false),
        },
        Status::Inconclusive => unreachable!(),
    }
}

fn param(verdict: &Verdict, key: &str) -> Result<f64> {
    verdict
        .params
        .as_ref()
        .and_then(|p| p.get(key))
        .and_then(|d| d.as_f64())
        .ok_or_else(|| Error::input(format!("verdict params lack {key}")))
}

fn pairs_complete(cover: &BallCover, pairs: &[PairEvidence]) -> bool {
    let len = cover.len();
    let seen: HashSet<(usize, usize)> = pairs.iter().map(|p| (p.u, p.v)).collect();
    seen.len() == len * len && pairs.iter().all(|p| p.u < len && p.v < len)
}

fn replay_confirmed(rel: &Relation, verdict: &Verdict, witness: &Witness) -> Result<bool> {
    let bounds = &verdict.bounds;
    let name = verdict.checker;
    let space = rel.space();
    match witness {
        Witness::Cover { cover, pairs } => {
            if !pairs_complete(cover, pairs) {
                return Ok(false);
            }
            let check = |p: &PairEvidence, h: &LevelHit| {
                h.n <= bounds.n_max
                    && if name.is_super() {
                        check_contain(rel, cover, p.u, p.v, h)
                    } else {
                        check_hit(rel, cover, p.u, p.v, h)
                    }
            };
            if !pairs.iter().all(|p| p.hits.iter().all(|h| check(p, h))) {
                return Ok(false);
            }
            Ok(match name {
                CheckerName::Transitivity | CheckerName::SuperTransitivity => {
                    pairs.iter().all(|p| !p.hits.is_empty())
                }
                CheckerName::WeakMixing | CheckerName::SuperWeakMixing => {
                    let levels: Vec<HashSet<usize>> = pairs
                        .iter()
                        .map(|p| p.hits.iter().map(|h| h.n).collect())
                        .collect();
                    levels
                        .iter()
                        .all(|a| levels.iter().all(|b| !a.is_disjoint(b)))
                }
                CheckerName::TopologicalMixing | CheckerName::SuperTopologicalMixing => {
                    let k = mixing_threshold(bounds.n_max);
                    pairs.iter().all(|p| {
                        let ns: HashSet<usize> = p.hits.iter().map(|h| h.n).collect();
                        (k..=bounds.n_max).all(|n| ns.contains(&n))
                    })
                }
                _ => false,
            })
        }
        Witness::Periods { points } => {
            if name != CheckerName::DensePeriodicityRelation {
                return Ok(false);
            }
            for (x, n) in points {
                if *n == 0 || *n > bounds.n_max {
                    return Ok(false);
                }
                let img = rel.n_fold_image(*n, x)?;
                if !img.points().iter().any(|y| y.distance_unchecked(x) <= bounds.tol) {
                    return Ok(false);
                }
            }
            Ok(!points.is_empty())
        }
        Witness::PeriodicSets { entries } => {
            if name != CheckerName::DensePeriodicityInduced {
                return Ok(false);
            }
            for e in entries {
                let seed = HSet::new(space, e.seed.points().to_vec())?;
                let set = HSet::new(space, e.set.points().to_vec())?;
                if e.n == 0 || e.n > bounds.n_max {
                    return Ok(false);
                }
                if hausdorff_distance(space, &seed, &set)? > bounds.net_eps() {
                    return Ok(false);
                }
                let mut img = set.clone();
                for _ in 0..e.n {
                    img = induced_map(rel, &img)?;
                }
                if hausdorff_distance(space, &img, &set)? > bounds.tol {
                    return Ok(false);
                }
            }
            Ok(!entries.is_empty())
        }
        Witness::Separations { entries } => {
            if name != CheckerName::SensitivityInduced {
                return Ok(false);
            }
            let delta = param(verdict, "delta")?;
            for e in entries {
                let (mut a, mut b) = (
                    HSet::new(space, e.seed.points().to_vec())?,
                    HSet::new(space, e.perturbed.points().to_vec())?,
                );
                let d0 = hausdorff_distance(space, &a, &b)?;
                if !(d0 > 0.0 && d0 < bounds.net_eps()) || e.n == 0 || e.n > bounds.n_max {
                    return Ok(false);
                }
                for _ in 0..e.n {
                    a = induced_map(rel, &a)?;
                    b = induced_map(rel, &b)?;
                }
                if hausdorff_distance(space, &a, &b)? <= delta {
                    return Ok(false);
                }
            }
            Ok(!entries.is_empty())
        }
        Witness::Lemma(w) => {
            if name != CheckerName::Lemma1Convergence
                || w.levels.len() != w.radii.len()
                || w.levels.is_empty()
            {
                return Ok(false);
            }
            let target = HSet::singleton(w.target.clone());
            let mut previous = 0;
            for (&n, &r) in w.levels.iter().zip(&w.radii) {
                if n <= previous || n > bounds.n_max {
                    return Ok(false);
                }
                previous = n;
                let img = rel.n_fold_image(n, &w.u)?;
                if hausdorff_distance(space, &img, &target)? >= r {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(false),
    }
}

fn all_no(engine: &Engine, contain: bool, u: usize, v: usize, levels: impl Iterator<Item = usize>) -> Result<bool> {
    for n in levels {
        if !matches!(engine.fact(contain, u, v, n)?, Fact::No) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn replay_certificate(
    rel: &Relation,
    bounds: &Bounds,
    cover: Option<&BallCover>,
    certificate: &Certificate,
) -> Result<bool> {
    let n_max = bounds.n_max;
    let engine = |c: &BallCover| Engine::new(rel, c.clone(), n_max, bounds.net_eps());
    match certificate {
        Certificate::NoWalk { u, v } => {
            let Some(c) = cover else { return Ok(false) };
            if rel.table_net().is_none() || *u >= c.len() || *v >= c.len() {
                return Ok(false);
            }
            let graph = ReachGraph::build(rel, c, bounds.net_eps())?;
            Ok(!graph.reachable_from(*u)[*v])
        }
        Certificate::NeverReaches {
            u,
            v,
            cycle_start,
            period,
        } => {
            let Some(c) = cover else { return Ok(false) };
            let e = engine(c)?;
            let cycle = e.cycle(*u)?;
            Ok(cycle.is_some_and(|cy| cy.start == *cycle_start && cy.period == *period)
                && cycle_start + period <= n_max + 1
                && all_no(&e, false, *u, *v, 1..=n_max)?)
        }
        Certificate::RecurringMiss {
            u,
            v,
            fail_level,
            cycle_start,
            period,
        } => {
            let Some(c) = cover else { return Ok(false) };
            let e = engine(c)?;
            let cycle = e.cycle(*u)?;
            let contain = matches!(e.fact(true, *u, *v, *fail_level)?, Fact::No);
            let hit = matches!(e.fact(false, *u, *v, *fail_level)?, Fact::No);
            Ok(cycle.is_some_and(|cy| cy.start == *cycle_start && cy.period == *period)
                && fail_level >= cycle_start
                && *fail_level <= n_max
                && (contain || hit))
        }
        Certificate::NoCommonLevel {
            first,
            second,
            cycle_start,
            period,
        } => {
            let Some(c) = cover else { return Ok(false) };
            let e = engine(c)?;
            if cycle_start + period > n_max + 1 {
                return Ok(false);
            }
            for contain in [false, true] {
                let mut ok = true;
                for n in 1..=n_max {
                    let a = matches!(e.fact(contain, first.0, first.1, n)?, Fact::No);
                    let b = matches!(e.fact(contain, second.0, second.1, n)?, Fact::No);
                    if !(a || b) {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Certificate::NoContainment { u, v, n_max: m } => {
            let Some(c) = cover else { return Ok(false) };
            let e = engine(c)?;
            Ok(*m == n_max && all_no(&e, true, *u, *v, 1..=n_max)?)
        }
        Certificate::NoReturn { center, min_return: m } => {
            if let Some(Translations::Angles(angles)) = rel.translations() {
                let recomputed = min_return(&angles, n_max, rel.space().dedup_tolerance)?;
                return Ok((recomputed - m).abs() <= 1e-12 && recomputed >= bounds.tol + MARGIN);
            }
            if rel.table_net().is_some() {
                for n in 1..=n_max {
                    let img = rel.n_fold_image(n, center)?;
                    if img.points().iter().any(|y| y.distance_unchecked(center) <= bounds.tol) {
                        return Ok(false);
                    }
                }
                return Ok(true);
            }
            Ok(false)
        }
        Certificate::NoNearbyPeriodicSet {
            seed,
            census,
            min_distance,
        } => {
            let fresh = periodic_set_census(rel)?;
            if &fresh != census {
                return Ok(false);
            }
            let net = rel.table_net().expect("census succeeded");
            let space = rel.space();
            let seed = HSet::new(space, seed.points().to_vec())?;
            let mut best = f64::INFINITY;
            for ps in &fresh.periodic {
                let b = HSet::new(space, ps.members.iter().map(|&j| net.point(j)).collect())?;
                best = best.min(hausdorff_distance(space, &seed, &b)?);
            }
            Ok(best == *min_distance && best > bounds.net_eps())
        }
        Certificate::Isometry => Ok(rel.maps().iter().all(|m| m.is_isometry())),
        Certificate::LemmaStage {
            previous_n,
            radius,
            ball,
            target,
            ..
        } => stage_certificate(rel, bounds, *previous_n, *radius, ball, target),
    }
}
