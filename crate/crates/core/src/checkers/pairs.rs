//! Transitivity and mixing checkers, plain and pointwise ("super").

use std::collections::HashMap;

use super::engine::{Engine, Fact};
use super::reach::ReachGraph;
use super::{
    checker_cover, timed, Bounds, Certificate, CheckerName, LevelHit, Outcome, PairEvidence,
    Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::relation::Relation;

/// Fixed-width bit set over levels `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Levels(Vec<u64>);

impl Levels {
    pub fn new(n_max: usize) -> Self {
        Levels(vec![0; n_max / 64 + 1])
    }

    pub fn set(&mut self, n: usize) {
        self.0[n / 64] |= 1 << (n % 64);
    }

    pub fn get(&self, n: usize) -> bool {
        self.0[n / 64] >> (n % 64) & 1 == 1
    }

    pub fn first_common(&self, other: &Levels) -> Option<usize> {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .find_map(|(w, (a, b))| {
                let m = a & b;
                (m != 0).then(|| w * 64 + m.trailing_zeros() as usize)
            })
    }

    /// Every level in `1..=n_max` is set in `self` or `other`.
    pub fn covers_with(&self, other: &Levels, n_max: usize) -> bool {
        (1..=n_max).all(|n| self.get(n) || other.get(n))
    }
}

fn setup<'a>(rel: &'a Relation, bounds: &Bounds) -> Result<Engine<'a>> {
    let cover = checker_cover(rel, bounds)?;
    Engine::new(rel, cover, bounds.n_max, bounds.net_eps())
}

/// `F^n(U) ∩ V ≠ ∅` for some `n <= n_max`, for every ordered cover pair.
pub fn check_transitivity(rel: &Relation, bounds: &Bounds) -> Result<Verdict> {
    timed(CheckerName::Transitivity, bounds, None, || joined(rel, bounds, false))
}

/// Some `x ∈ U` has `F^n(x) ⊆ V` for some `n <= n_max`, for every pair.
pub fn check_super_transitivity(rel: &Relation, bounds: &Bounds) -> Result<Verdict> {
    timed(CheckerName::SuperTransitivity, bounds, None, || {
        joined(rel, bounds, true)
    })
}

fn joined(rel: &Relation, bounds: &Bounds, contain: bool) -> Result<Outcome> {
    let engine = setup(rel, bounds)?;
    let len = engine.len();
    let graph = match rel.table_net() {
        Some(_) if !contain => Some(ReachGraph::build(rel, &engine.cover, bounds.net_eps())?),
        _ => None,
    };
    let mut evidence = Vec::new();
    let mut stored = 0usize;
    let mut unresolved = None;
    for u in 0..len {
        let reach = graph.as_ref().map(|g| g.reachable_from(u));
        for v in 0..len {
            if let Some(r) = &reach {
                if !r[v] {
                    return Ok(Outcome::refuted(Witness::Refutation {
                        cover: Some(engine.cover.clone()),
                        certificate: Certificate::NoWalk { u, v },
                    }));
                }
            }
            let mut all_no = true;
            let mut found = None;
            for n in 1..=bounds.n_max {
                match engine.fact(contain, u, v, n)? {
                    Fact::Yes(h) => {
                        found = Some(h);
                        break;
                    }
                    Fact::No => {}
                    Fact::Unknown => all_no = false,
                }
            }
            if let Some(h) = found {
                stored = store(stored, 1, len, bounds.n_max)?;
                evidence.push(PairEvidence { u, v, hits: vec![h] });
                continue;
            }
            if all_no {
                if contain {
                    return Ok(Outcome::refuted(Witness::Refutation {
                        cover: Some(engine.cover.clone()),
                        certificate: Certificate::NoContainment {
                            u,
                            v,
                            n_max: bounds.n_max,
                        },
                    }));
                }
                if let Some(c) = engine.cycle(u)? {
                    return Ok(Outcome::refuted(Witness::Refutation {
                        cover: Some(engine.cover.clone()),
                        certificate: Certificate::NeverReaches {
                            u,
                            v,
                            cycle_start: c.start,
                            period: c.period,
                        },
                    }));
                }
            }
            unresolved.get_or_insert((u, v));
        }
    }
    Ok(match unresolved {
        None => Outcome::confirmed(Witness::Cover {
            cover: engine.cover.clone(),
            pairs: evidence,
        }),
        Some((u, v)) => Outcome::inconclusive(Some(Witness::Unresolved {
            cover: engine.cover.clone(),
            u,
            v,
        })),
    })
}

/// Level hits a single witness may hold.
pub const EVIDENCE_CAP: usize = 1 << 21;

fn store(stored: usize, add: usize, len: usize, n_max: usize) -> Result<usize> {
    let total = stored + add;
    if total > EVIDENCE_CAP {
        return Err(Error::Resource {
            what: "witness hits",
            requested: (len * len) as u128 * n_max as u128,
            cap: EVIDENCE_CAP,
        });
    }
    Ok(total)
}

struct PairTable {
    yes: Vec<Levels>,
    no: Vec<Levels>,
}

fn all_levels(engine: &Engine, contain: bool, n_max: usize) -> Result<PairTable> {
    let len = engine.len();
    let mut yes = Vec::with_capacity(len * len);
    let mut no = Vec::with_capacity(len * len);
    for u in 0..len {
        for v in 0..len {
            let mut y = Levels::new(n_max);
            let mut x = Levels::new(n_max);
            for n in 1..=n_max {
                match engine.fact(contain, u, v, n)? {
                    Fact::Yes(_) => y.set(n),
                    Fact::No => x.set(n),
                    Fact::Unknown => {}
                }
            }
            yes.push(y);
            no.push(x);
        }
    }
    Ok(PairTable { yes, no })
}

fn hit_at(engine: &Engine, contain: bool, u: usize, v: usize, n: usize) -> Result<LevelHit> {
    match engine.fact(contain, u, v, n)? {
        Fact::Yes(h) => Ok(h),
        _ => unreachable!("level facts are deterministic"),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Two cover pairs joined at one common level, for every two pairs.
pub fn check_weak_mixing(rel: &Relation, bounds: &Bounds) -> Result<Verdict> {
    timed(CheckerName::WeakMixing, bounds, None, || product(rel, bounds, false))
}

/// Two points, one per pair, with images inside the targets at one common
/// level, for every two pairs.
pub fn check_super_weak_mixing(rel: &Relation, bounds: &Bounds) -> Result<Verdict> {
    timed(CheckerName::SuperWeakMixing, bounds, None, || {
        product(rel, bounds, true)
    })
}

fn product(rel: &Relation, bounds: &Bounds, contain: bool) -> Result<Outcome> {
    let engine = setup(rel, bounds)?;
    engine.require_product_cap()?;
    let len = engine.len();
    let n_max = bounds.n_max;
    let table = all_levels(&engine, contain, n_max)?;

    // group pairs with identical level sets
    let mut classes: HashMap<&Levels, usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for (p, y) in table.yes.iter().enumerate() {
        classes.entry(y).or_insert_with(|| {
            reps.push(p);
            reps.len() - 1
        });
    }
    let mut common_levels: Vec<usize> = Vec::new();
    let mut failing = None;
    'outer: for (a, &p) in reps.iter().enumerate() {
        for &q in &reps[a..] {
            match table.yes[p].first_common(&table.yes[q]) {
                Some(n) => common_levels.push(n),
                None => {
                    failing = Some((p, q));
                    break 'outer;
                }
            }
        }
    }

    if failing.is_none() {
        common_levels.sort_unstable();
        common_levels.dedup();
        let mut pairs = Vec::with_capacity(len * len);
        for (p, y) in table.yes.iter().enumerate() {
            let (u, v) = (p / len, p % len);
            let hits = common_levels
                .iter()
                .filter(|&&n| y.get(n))
                .map(|&n| hit_at(&engine, contain, u, v, n))
                .collect::<Result<Vec<_>>>()?;
            pairs.push(PairEvidence { u, v, hits });
        }
        return Ok(Outcome::confirmed(Witness::Cover {
            cover: engine.cover.clone(),
            pairs,
        }));
    }

    // a refutation needs two pairs whose certified misses cover every level
    // of a joint period
    let mut no_classes: HashMap<&Levels, usize> = HashMap::new();
    let mut no_reps: Vec<usize> = Vec::new();
    for (p, x) in table.no.iter().enumerate() {
        no_classes.entry(x).or_insert_with(|| {
            no_reps.push(p);
            no_reps.len() - 1
        });
    }
    for (a, &p) in no_reps.iter().enumerate() {
        for &q in &no_reps[a..] {
            if !table.no[p].covers_with(&table.no[q], n_max) {
                continue;
            }
            let (Some(cp), Some(cq)) = (engine.cycle(p / len)?, engine.cycle(q / len)?) else {
                continue;
            };
            let start = cp.start.max(cq.start);
            let period = cp.period / gcd(cp.period, cq.period) * cq.period;
            if start + period > n_max + 1 {
                continue;
            }
            let certificate = if contain && p == q {
                Certificate::NoContainment {
                    u: p / len,
                    v: p % len,
                    n_max,
                }
            } else {
                Certificate::NoCommonLevel {
                    first: (p / len, p % len),
                    second: (q / len, q % len),
                    cycle_start: start,
                    period,
                }
            };
            return Ok(Outcome::refuted(Witness::Refutation {
                cover: Some(engine.cover.clone()),
                certificate,
            }));
        }
    }
    // pointwise containment certificates do not need periodicity
    if contain {
        if let Some(p) = (0..len * len).find(|&p| (1..=n_max).all(|n| table.no[p].get(n))) {
            return Ok(Outcome::refuted(Witness::Refutation {
                cover: Some(engine.cover.clone()),
                certificate: Certificate::NoContainment {
                    u: p / len,
                    v: p % len,
                    n_max,
                },
            }));
        }
    }
    let (p, _) = failing.expect("set above");
    Ok(Outcome::inconclusive(Some(Witness::Unresolved {
        cover: engine.cover.clone(),
        u: p / len,
        v: p % len,
    })))
}

/// Level from which every level up to `n_max` must be joined.
pub(crate) fn mixing_threshold(n_max: usize) -> usize {
    n_max - n_max.div_ceil(2) + 1
}

/// `F^n(U) ∩ V ≠ ∅` for all `n` in `[K, n_max]`, with `K` at most
/// [`mixing_threshold`], for every pair.
pub fn check_topological_mixing(rel: &Relation, bounds: &Bounds) -> Result<Verdict> {
    timed(CheckerName::TopologicalMixing, bounds, None, || {
        eventually(rel, bounds, false)
    })
}

/// Pointwise version of [`check_topological_mixing`]: every level in
/// `[K, n_max]` has a point of `U` whose image lies in `V`.
pub fn check_super_topological_mixing(rel: &Relation, bounds: &Bounds) -> Result<Verdict> {
    timed(CheckerName::SuperTopologicalMixing, bounds, None, || {
        eventually(rel, bounds, true)
    })
}

fn eventually(rel: &Relation, bounds: &Bounds, contain: bool) -> Result<Outcome> {
    let engine = setup(rel, bounds)?;
    let len = engine.len();
    let n_max = bounds.n_max;
    let threshold = mixing_threshold(n_max);
    let mut evidence = Vec::new();
    let mut stored = 0usize;
    let mut unresolved = None;
    for u in 0..len {
        let cycle = engine.cycle(u)?;
        for v in 0..len {
            let mut hits = Vec::new();
            let mut miss: Option<(usize, bool)> = None;
            for n in (1..=n_max).rev() {
                match engine.fact(contain, u, v, n)? {
                    Fact::Yes(h) => hits.push(h),
                    f => {
                        miss = Some((n, f.is_no()));
                        break;
                    }
                }
            }
            let k = miss.map_or(1, |(n, _)| n + 1);
            if k <= threshold {
                hits.reverse();
                stored = store(stored, hits.len(), len, bounds.n_max)?;
                evidence.push(PairEvidence { u, v, hits });
                continue;
            }
            // a certified miss inside the repeating part recurs forever
            if let Some(c) = cycle {
                let recurring = (c.start..=n_max)
                    .find(|&n| matches!(engine.fact(contain, u, v, n), Ok(Fact::No)));
                if let Some(fail_level) = recurring {
                    return Ok(Outcome::refuted(Witness::Refutation {
                        cover: Some(engine.cover.clone()),
                        certificate: Certificate::RecurringMiss {
                            u,
                            v,
                            fail_level,
                            cycle_start: c.start,
                            period: c.period,
                        },
                    }));
                }
            }
            if contain && (1..=n_max).all(|n| matches!(engine.contain(u, v, n), Ok(Fact::No))) {
                return Ok(Outcome::refuted(Witness::Refutation {
                    cover: Some(engine.cover.clone()),
                    certificate: Certificate::NoContainment { u, v, n_max },
                }));
            }
            unresolved.get_or_insert((u, v));
        }
    }
    Ok(match unresolved {
        None => Outcome::confirmed(Witness::Cover {
            cover: engine.cover.clone(),
            pairs: evidence,
        }),
        Some((u, v)) => Outcome::inconclusive(Some(Witness::Unresolved {
            cover: engine.cover.clone(),
            u,
            v,
        })),
    })
}
