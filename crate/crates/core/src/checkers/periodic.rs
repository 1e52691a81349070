//! Dense periodicity of the family and of the induced map.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::engine::{angle_levels, MARGIN};
use super::{
    timed, Bounds, Certificate, CheckerName, Outcome, PeriodicEntry, Verdict, Witness,
    CENSUS_NET_CAP,
};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, induced_map, HSet};
use crate::relation::{MapDescriptor, Relation, Translations};
use crate::spaces::{arc, Net, Point};

/// Net points examined by the pointwise checker.
pub(crate) const POINT_CAP: usize = 1 << 16;
/// Largest hyperspace element followed along an induced orbit.
const ORBIT_SET_CAP: usize = 10_000;
/// Seed for the random default seeds of the induced checker.
pub const DEFAULT_SEED_RNG: u64 = 0x5eed;

pub(crate) fn sample_points(rel: &Relation, bounds: &Bounds) -> Result<Vec<Point>> {
    match rel.table_net() {
        Some(net) => net.materialize(POINT_CAP),
        None => Net::for_eps(rel.space(), bounds.net_eps())?.materialize(POINT_CAP),
    }
}

/// Smallest return distance `min_{d ∈ D_n} |d|` over `n <= n_max` for a
/// rotation family.
pub(crate) fn min_return(angles: &[f64], n_max: usize, tol: f64) -> Result<f64> {
    let tree = angle_levels(angles, n_max, tol)?;
    Ok(tree
        .nodes
        .iter()
        .flatten()
        .map(|&d| arc(d, 0.0))
        .fold(f64::INFINITY, f64::min))
}

/// Every net point `x` has `d(x, F^n(x)) <= tol` for some `n <= n_max`.
pub fn check_dense_periodicity_relation(rel: &Relation, bounds: &Bounds) -> Result<Verdict> {
    timed(CheckerName::DensePeriodicityRelation, bounds, None, || {
        let points = sample_points(rel, bounds)?;
        let mut periods = Vec::with_capacity(points.len());
        for x in &points {
            match rel.is_periodic_point(x, bounds.n_max, bounds.tol)? {
                Some(n) => periods.push((x.clone(), n)),
                None => return refute_periodicity(rel, bounds, x),
            }
        }
        Ok(Outcome::confirmed(Witness::Periods { points: periods }))
    })
}

fn refute_periodicity(rel: &Relation, bounds: &Bounds, x: &Point) -> Result<Outcome> {
    if let Some(Translations::Angles(angles)) = rel.translations() {
        let m = min_return(&angles, bounds.n_max, rel.space().dedup_tolerance)?;
        if m >= bounds.tol + MARGIN {
            return Ok(Outcome::refuted(Witness::Refutation {
                cover: None,
                certificate: Certificate::NoReturn {
                    center: x.clone(),
                    min_return: m,
                },
            }));
        }
    }
    if rel.table_net().is_some() {
        // the ball of a table point holds that point alone
        let m = (1..=bounds.n_max)
            .map(|n| {
                rel.n_fold_image(n, x).map(|s| {
                    s.points()
                        .iter()
                        .map(|y| y.distance_unchecked(x))
                        .fold(f64::INFINITY, f64::min)
                })
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        return Ok(Outcome::refuted(Witness::Refutation {
            cover: None,
            certificate: Certificate::NoReturn {
                center: x.clone(),
                min_return: m,
            },
        }));
    }
    Ok(Outcome::inconclusive(Some(Witness::Unsettled {
        note: format!("no return of {x} within the horizon"),
    })))
}

/// One `F̄`-periodic subset of a table net.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSet {
    pub members: Vec<usize>,
    pub period: usize,
}

/// All `F̄`-periodic subsets of a table net, found by following `F̄` from
/// every nonempty subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub net_size: usize,
    pub subsets_examined: usize,
    pub periodic: Vec<PeriodicSet>,
}

fn table_images(rel: &Relation) -> Result<Vec<u32>> {
    let net = rel
        .table_net()
        .ok_or_else(|| Error::input("the census needs a family of table maps"))?;
    let m = net.size() as usize;
    if m > CENSUS_NET_CAP {
        return Err(Error::Resource {
            what: "subset census",
            requested: 1u128 << m.min(127),
            cap: 1 << CENSUS_NET_CAP,
        });
    }
    let mut img = vec![0u32; m];
    for map in rel.maps() {
        let MapDescriptor::TableMap { table } = map else {
            unreachable!()
        };
        for (j, &t) in table.iter().enumerate() {
            img[j] |= 1 << t;
        }
    }
    Ok(img)
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).collect()
}

pub fn periodic_set_census(rel: &Relation) -> Result<Census> {
    let img = table_images(rel)?;
    let m = img.len();
    let step = |mask: u32| {
        members(mask)
            .into_iter()
            .fold(0u32, |acc, j| acc | img[j])
    };
    let total = 1usize << m;
    // 0 unvisited, 1 on the current path, 2 finished
    let mut state = vec![0u8; total];
    let mut period = vec![0usize; total];
    for start in 1..total {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        while state[cur] == 0 {
            state[cur] = 1;
            path.push(cur);
            cur = step(cur as u32) as usize;
        }
        if state[cur] == 1 {
            let pos = path.iter().position(|&p| p == cur).expect("on path");
            let len = path.len() - pos;
            for &p in &path[pos..] {
                period[p] = len;
            }
        }
        for p in path {
            state[p] = 2;
        }
    }
    let periodic = (1..total)
        .filter(|&mask| period[mask] > 0)
        .map(|mask| PeriodicSet {
            members: members(mask as u32),
            period: period[mask],
        })
        .collect();
    Ok(Census {
        net_size: m,
        subsets_examined: total - 1,
        periodic,
    })
}

fn net_set(rel: &Relation, net: &Net, idx: &[usize]) -> Result<HSet> {
    HSet::new(rel.space(), idx.iter().map(|&j| net.point(j)).collect())
}

fn default_seeds(rel: &Relation, bounds: &Bounds) -> Result<Vec<HSet>> {
    let mut points = sample_points(rel, bounds)?;
    if points.len() > 64 {
        let stride = points.len().div_ceil(64);
        points = points.into_iter().step_by(stride).collect();
    }
    let mut seeds: Vec<HSet> = points.iter().map(|p| HSet::singleton(p.clone())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED_RNG);
    for size in [2, 2, 3, 3] {
        if points.len() >= size {
            let pick: Vec<Point> = points.choose_multiple(&mut rng, size).cloned().collect();
            seeds.push(HSet::new(rel.space(), pick)?);
        }
    }
    Ok(seeds)
}

/// Orbit `B, F̄(B), ...` up to `len` sets, stopping early at the size cap.
fn set_orbit(rel: &Relation, b: &HSet, len: usize) -> Result<Vec<HSet>> {
    let mut orbit = vec![b.clone()];
    while orbit.len() < len {
        let last = orbit.last().expect("nonempty");
        if last.len() * rel.k() > ORBIT_SET_CAP {
            break;
        }
        orbit.push(induced_map(rel, last)?);
    }
    Ok(orbit)
}

/// Each seed `A` has an `F̄`-periodic set `B` with `d_H(A, B) <= net_eps`.
pub fn check_dense_periodicity_induced(
    rel: &Relation,
    bounds: &Bounds,
    seeds: &[HSet],
) -> Result<Verdict> {
    timed(CheckerName::DensePeriodicityInduced, bounds, None, || {
        let seeds = if seeds.is_empty() {
            default_seeds(rel, bounds)?
        } else {
            seeds.to_vec()
        };
        for s in &seeds {
            for p in s.points() {
                rel.space().check(p)?;
            }
        }
        let space = rel.space();
        let eps = bounds.net_eps();
        let census = match rel.table_net() {
            Some(net) if net.size() <= CENSUS_NET_CAP as u128 => {
                Some((net, periodic_set_census(rel)?))
            }
            _ => None,
        };
        let mut entries = Vec::with_capacity(seeds.len());
        for seed in &seeds {
            if let Some((net, census)) = &census {
                let mut d = f64::INFINITY;
                for ps in &census.periodic {
                    d = d.min(hausdorff_distance(space, seed, &net_set(rel, net, &ps.members)?)?);
                }
                let near_in_bounds = census
                    .periodic
                    .iter()
                    .filter(|ps| ps.period <= bounds.n_max)
                    .map(|ps| {
                        net_set(rel, net, &ps.members)
                            .and_then(|b| Ok((hausdorff_distance(space, seed, &b)?, b, ps.period)))
                    })
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .filter(|(dd, _, _)| *dd <= eps)
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                if let Some((dd, bb, period)) = near_in_bounds {
                    entries.push(PeriodicEntry {
                        seed: seed.clone(),
                        set: bb,
                        n: period,
                        distance: dd,
                    });
                    continue;
                }
                if d > eps {
                    return Ok(Outcome::refuted(Witness::Refutation {
                        cover: None,
                        certificate: Certificate::NoNearbyPeriodicSet {
                            seed: seed.clone(),
                            census: census.clone(),
                            min_distance: d,
                        },
                    }));
                }
                return Ok(Outcome::inconclusive(Some(Witness::Unsettled {
                    note: "the nearby periodic sets have periods beyond n_max".into(),
                })));
            }
            match nearby_periodic(rel, bounds, seed)? {
                Some(entry) => entries.push(entry),
                None => {
                    return Ok(Outcome::inconclusive(Some(Witness::Unsettled {
                        note: format!("no periodic candidate near seed of {} points", seed.len()),
                    })))
                }
            }
        }
        Ok(Outcome::confirmed(Witness::PeriodicSets { entries }))
    })
}

/// Searches the induced orbits of `A` and of its points for a set `B`
/// within `net_eps` of `A` with `d_H(F̄^n(B), B) <= tol`.
fn nearby_periodic(rel: &Relation, bounds: &Bounds, seed: &HSet) -> Result<Option<PeriodicEntry>> {
    let space = rel.space();
    let mut starts = vec![seed.clone()];
    if seed.len() > 1 {
        starts.extend(seed.points().iter().map(|p| HSet::singleton(p.clone())));
    }
    for start in starts {
        let orbit = set_orbit(rel, &start, 2 * bounds.n_max + 1)?;
        for (j, b) in orbit.iter().enumerate() {
            let d = hausdorff_distance(space, seed, b)?;
            if d > bounds.net_eps() {
                continue;
            }
            for n in 1..=bounds.n_max {
                let Some(later) = orbit.get(j + n) else {
                    break;
                };
                if hausdorff_distance(space, later, b)? <= bounds.tol {
                    return Ok(Some(PeriodicEntry {
                        seed: seed.clone(),
                        set: b.clone(),
                        n,
                        distance: d,
                    }));
                }
            }
        }
    }
    Ok(None)
}
