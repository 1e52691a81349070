//! Level-by-level evaluation of `F^n(U) ∩ V ≠ ∅` and `F^n(x) ⊆ V` over a
//! ball cover.
//!
//! Rotation families and table systems are evaluated exactly: a rotation
//! family moves a ball `U` to `U + D_n`, where `D_n` is the set of total
//! angles of length-`n` words, and a table system is a finite graph. Shift
//! families and everything else are searched on candidate points.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::rc::Rc;

use super::replay::{check_contain, check_hit};
use super::{LevelHit, PRODUCT_COVER_CAP};
use crate::error::{Error, Result};
use crate::relation::{MapDescriptor, Relation, Word};
use crate::spaces::{arc, normalize_angle, BallCover, BiSeq, Net, Point};

/// Slack kept between a certified miss and the floating-point boundary.
pub(crate) const MARGIN: f64 = 1e-8;
/// Sample points tried per cover ball.
pub(crate) const SAMPLE_CAP: usize = 64;
/// Largest level kept for one orbit.
pub(crate) const LEVEL_CAP: usize = 200_000;
/// Sampled orbits stop growing past this level size.
const GENERIC_LEVEL_CAP: usize = 4096;
/// Quasi-random points added to the net samples of a ball.
const SCATTER: usize = 16;

#[derive(Debug, Clone)]
pub(crate) enum Fact {
    Yes(LevelHit),
    No,
    Unknown,
}

impl Fact {
    pub fn is_no(&self) -> bool {
        matches!(self, Fact::No)
    }
}

/// Levels `n >= start + period` repeat level `n - period`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Cycle {
    pub start: usize,
    pub period: usize,
}

/// Levels `1..=n_max` of a deduplicated word tree: `nodes[n - 1][j]` was
/// produced from `nodes[n - 2][parent]` by generator `gen`.
#[derive(Debug, Clone)]
pub(crate) struct LevelTree<P> {
    pub nodes: Vec<Vec<P>>,
    parents: Vec<Vec<(u32, u8)>>,
    pub cycle: Option<Cycle>,
}

impl<P> LevelTree<P> {
    fn generators(&self, n: usize, mut j: usize) -> Vec<usize> {
        let mut gens = Vec::with_capacity(n);
        for level in (0..n).rev() {
            let (parent, g) = self.parents[level][j];
            gens.push(g as usize);
            j = parent as usize;
        }
        gens
    }

    /// Outermost letter first.
    pub fn letters(&self, n: usize, j: usize) -> Word {
        Word::Letters(self.generators(n, j))
    }

    pub fn exponents(&self, n: usize, j: usize, k: usize) -> Word {
        let mut e = vec![0; k];
        for g in self.generators(n, j) {
            e[g] += 1;
        }
        Word::Exponents(e)
    }

    pub fn level(&self, n: usize) -> &[P] {
        &self.nodes[n - 1]
    }

    /// Level `n`, if it was grown.
    pub fn get_level(&self, n: usize) -> Option<&[P]> {
        self.nodes.get(n - 1).map(Vec::as_slice)
    }
}

/// Builds levels by applying every generator to every node, then sorting
/// and merging nodes with `same`, keeping the first representative.
fn grow<P: Clone>(
    first: P,
    k: usize,
    n_max: usize,
    apply: impl Fn(&P, usize) -> Result<P>,
    cmp: impl Fn(&P, &P) -> std::cmp::Ordering,
    same: impl Fn(&P, &P) -> bool,
    wrap_same: impl Fn(&P, &P) -> bool,
    cap: Option<usize>,
) -> Result<LevelTree<P>> {
    let mut nodes: Vec<Vec<P>> = Vec::with_capacity(n_max);
    let mut parents: Vec<Vec<(u32, u8)>> = Vec::with_capacity(n_max);
    let mut prev = vec![first];
    for _ in 0..n_max {
        let mut next: Vec<(P, u32, u8)> = Vec::with_capacity(prev.len() * k);
        for (j, p) in prev.iter().enumerate() {
            for g in 0..k {
                next.push((apply(p, g)?, j as u32, g as u8));
            }
        }
        next.sort_by(|a, b| cmp(&a.0, &b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        let mut level: Vec<P> = Vec::with_capacity(next.len());
        let mut par = Vec::with_capacity(next.len());
        for (p, j, g) in next {
            if level.last().is_some_and(|last| same(last, &p)) {
                continue;
            }
            level.push(p);
            par.push((j, g));
        }
        if level.len() > 1 && wrap_same(&level[0], &level[level.len() - 1]) {
            level.pop();
            par.pop();
        }
        if cap.is_some_and(|c| level.len() > c) {
            break;
        }
        if level.len() > LEVEL_CAP {
            return Err(Error::Resource {
                what: "orbit level",
                requested: level.len() as u128,
                cap: LEVEL_CAP,
            });
        }
        prev = level.clone();
        nodes.push(level);
        parents.push(par);
    }
    Ok(LevelTree {
        nodes,
        parents,
        cycle: None,
    })
}

fn detect_cycle<P>(nodes: &[Vec<P>], eq: impl Fn(&[P], &[P]) -> bool) -> Option<Cycle> {
    let mut by_len: HashMap<usize, Vec<usize>> = HashMap::new();
    for (idx, level) in nodes.iter().enumerate() {
        let bucket = by_len.entry(level.len()).or_default();
        if let Some(&m) = bucket.iter().find(|&&m| eq(&nodes[m], level)) {
            return Some(Cycle {
                start: m + 1,
                period: idx - m,
            });
        }
        bucket.push(idx);
    }
    None
}

/// `D_n` for a rotation family, with words.
pub(crate) fn angle_levels(angles: &[f64], n_max: usize, tol: f64) -> Result<LevelTree<f64>> {
    let mut tree = grow(
        0.0f64,
        angles.len(),
        n_max,
        |d, g| Ok(normalize_angle(d + angles[g])),
        |a, b| a.total_cmp(b),
        |a, b| b - a <= tol,
        |first, last| TAU - last + first <= tol,
        None,
    )?;
    tree.cycle = detect_cycle(&tree.nodes, |a, b| {
        a.iter().zip(b).all(|(x, y)| arc(*x, *y) <= tol)
    });
    Ok(tree)
}

/// `D_n` for a family of shift powers, with words.
pub(crate) fn shift_levels(powers: &[i64], n_max: usize) -> Result<LevelTree<i64>> {
    let mut tree = grow(
        0i64,
        powers.len(),
        n_max,
        |d, g| Ok(d + powers[g]),
        |a, b| a.cmp(b),
        |a, b| a == b,
        |_, _| false,
        None,
    )?;
    tree.cycle = detect_cycle(&tree.nodes, |a, b| a == b);
    Ok(tree)
}

/// Smallest arc `[start, start + len]` holding every sorted angle.
pub(crate) fn covering_arc(sorted: &[f64]) -> (f64, f64) {
    let n = sorted.len();
    if n == 1 {
        return (sorted[0], 0.0);
    }
    let mut best_gap = TAU - sorted[n - 1] + sorted[0];
    let mut start = sorted[0];
    for j in 0..n - 1 {
        let gap = sorted[j + 1] - sorted[j];
        if gap > best_gap {
            best_gap = gap;
            start = sorted[j + 1];
        }
    }
    (start, (TAU - best_gap).max(0.0))
}

/// `b - a` reduced to `(-π, π]`.
fn signed(b: f64, a: f64) -> f64 {
    let d = (b - a).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

fn nearest_circular(sorted: &[f64], target: f64) -> usize {
    let n = sorted.len();
    let p = sorted.partition_point(|&d| d < target);
    let a = p % n;
    let b = (p + n - 1) % n;
    if arc(sorted[a], target) <= arc(sorted[b], target) {
        a
    } else {
        b
    }
}

fn angle_of(p: &Point) -> f64 {
    match p {
        Point::Circle(t) => *t,
        _ => unreachable!("rotation families act on the circle"),
    }
}

fn seq_of(p: &Point) -> &BiSeq {
    match p {
        Point::Sigma2(s) => s,
        _ => unreachable!("shift families act on sigma2"),
    }
}

enum Mode {
    Angles(LevelTree<f64>),
    Shifts { levels: LevelTree<i64>, window: u32 },
    Table {
        maps: Vec<Vec<usize>>,
        orbits: RefCell<HashMap<usize, Rc<LevelTree<usize>>>>,
    },
    Generic {
        orbits: RefCell<HashMap<usize, Rc<Vec<(Point, LevelTree<Point>)>>>>,
    },
}

pub(crate) struct Engine<'a> {
    pub rel: &'a Relation,
    pub cover: BallCover,
    pub n_max: usize,
    sample_net: Net,
    samples: RefCell<HashMap<usize, Rc<Vec<Point>>>>,
    mode: Mode,
}

impl<'a> Engine<'a> {
    pub fn new(rel: &'a Relation, cover: BallCover, n_max: usize, net_eps: f64) -> Result<Self> {
        let sample_net = Net::for_eps(rel.space(), net_eps)?;
        let mode = if rel.table_net().is_some() {
            let maps = rel
                .maps()
                .iter()
                .map(|m| match m {
                    MapDescriptor::TableMap { table } => table.clone(),
                    _ => unreachable!(),
                })
                .collect();
            Mode::Table {
                maps,
                orbits: RefCell::new(HashMap::new()),
            }
        } else {
            match rel.translations() {
                Some(crate::relation::Translations::Angles(a)) => {
                    Mode::Angles(angle_levels(&a, n_max, rel.space().dedup_tolerance)?)
                }
                Some(crate::relation::Translations::Shifts(p)) => match cover.centers {
                    Net::Sigma2 { window } => Mode::Shifts {
                        levels: shift_levels(&p, n_max)?,
                        window,
                    },
                    _ => unreachable!("sigma2 covers are cylinder nets"),
                },
                None => Mode::Generic {
                    orbits: RefCell::new(HashMap::new()),
                },
            }
        };
        Ok(Engine {
            rel,
            cover,
            n_max,
            sample_net,
            samples: RefCell::new(HashMap::new()),
            mode,
        })
    }

    pub fn len(&self) -> usize {
        self.cover.len()
    }

    pub fn require_product_cap(&self) -> Result<()> {
        if self.len() > PRODUCT_COVER_CAP {
            return Err(Error::Resource {
                what: "product cover",
                requested: self.len() as u128,
                cap: PRODUCT_COVER_CAP,
            });
        }
        Ok(())
    }

    /// Period structure of the levels seen from ball `u`, when known and
    /// fully inside the horizon.
    pub fn cycle(&self, u: usize) -> Result<Option<Cycle>> {
        Ok(match &self.mode {
            Mode::Angles(t) => t.cycle,
            Mode::Shifts { levels, .. } => levels.cycle,
            Mode::Table { .. } => self.table_orbit(u)?.cycle,
            Mode::Generic { .. } => None,
        })
    }

    fn samples(&self, u: usize) -> Rc<Vec<Point>> {
        if let Some(s) = self.samples.borrow().get(&u) {
            return s.clone();
        }
        let ball = self.cover.ball(u);
        let mut pts = vec![ball.center.clone()];
        for j in self.sample_net.points_within(&ball.center, ball.radius) {
            if pts.len() >= SAMPLE_CAP {
                break;
            }
            let p = self.sample_net.point(j);
            if !self.rel.space().same_point(&p, &ball.center) {
                pts.push(p);
            }
        }
        // net points are dyadic, and maps like doubling send them to a fixed
        // point within a few dozen steps
        for i in 1..=SCATTER {
            let t = (i as f64 * 0.618_033_988_749_894_9).fract() * 2.0 - 1.0;
            let p = match ball.center {
                Point::Circle(c) => Point::Circle(normalize_angle(c + 0.999 * ball.radius * t)),
                Point::Interval(c) => Point::Interval((c + 0.999 * ball.radius * t).clamp(0.0, 1.0)),
                Point::Sigma2(_) => break,
            };
            if ball.contains(&p) {
                pts.push(p);
            }
        }
        let rc = Rc::new(pts);
        self.samples.borrow_mut().insert(u, rc.clone());
        rc
    }

    fn table_orbit(&self, u: usize) -> Result<Rc<LevelTree<usize>>> {
        let Mode::Table { maps, orbits } = &self.mode else {
            unreachable!()
        };
        if let Some(t) = orbits.borrow().get(&u) {
            return Ok(t.clone());
        }
        let mut tree = grow(
            u,
            maps.len(),
            self.n_max,
            |&j, g| Ok(maps[g][j]),
            |a, b| a.cmp(b),
            |a, b| a == b,
            |_, _| false,
            None,
        )?;
        tree.cycle = detect_cycle(&tree.nodes, |a, b| a == b);
        let rc = Rc::new(tree);
        orbits.borrow_mut().insert(u, rc.clone());
        Ok(rc)
    }

    fn generic_orbits(&self, u: usize) -> Result<Rc<Vec<(Point, LevelTree<Point>)>>> {
        let Mode::Generic { orbits } = &self.mode else {
            unreachable!()
        };
        if let Some(t) = orbits.borrow().get(&u) {
            return Ok(t.clone());
        }
        let space = *self.rel.space();
        let mut out = Vec::new();
        for x in self.samples(u).iter() {
            let tree = grow(
                x.clone(),
                self.rel.k(),
                self.n_max,
                |p, g| self.rel.apply(g, p),
                |a, b| a.canonical_cmp(b),
                |a, b| space.same_point(a, b),
                |a, b| space.same_point(a, b),
                Some(GENERIC_LEVEL_CAP),
            )?;
            out.push((x.clone(), tree));
        }
        let rc = Rc::new(out);
        orbits.borrow_mut().insert(u, rc.clone());
        Ok(rc)
    }

    fn accept_hit(&self, u: usize, v: usize, hit: LevelHit) -> Option<Fact> {
        check_hit(self.rel, &self.cover, u, v, &hit).then_some(Fact::Yes(hit))
    }

    fn accept_contain(&self, u: usize, v: usize, hit: LevelHit) -> Option<Fact> {
        check_contain(self.rel, &self.cover, u, v, &hit).then_some(Fact::Yes(hit))
    }

    /// Is `F^n(U) ∩ V` nonempty?
    pub fn hit(&self, u: usize, v: usize, n: usize) -> Result<Fact> {
        let k = self.rel.k();
        let bu = self.cover.ball(u);
        let bv = self.cover.ball(v);
        match &self.mode {
            Mode::Angles(tree) => {
                let level = tree.level(n);
                let cu = angle_of(&bu.center);
                let cv = angle_of(&bv.center);
                let j = nearest_circular(level, normalize_angle(cv - cu));
                let landed = normalize_angle(cu + level[j]);
                let gap = arc(landed, cv);
                let reach = bu.radius + bv.radius;
                if gap >= reach + MARGIN {
                    return Ok(Fact::No);
                }
                if gap >= reach {
                    return Ok(Fact::Unknown);
                }
                let delta = signed(cv, landed);
                let lo = (-bu.radius).max(delta - bv.radius);
                let hi = bu.radius.min(delta + bv.radius);
                let x = Point::Circle(normalize_angle(cu + (lo + hi) / 2.0));
                let hit = LevelHit {
                    n,
                    x,
                    word: Some(tree.exponents(n, j, k)),
                };
                Ok(self.accept_hit(u, v, hit).unwrap_or(Fact::Unknown))
            }
            Mode::Table { .. } => {
                let tree = self.table_orbit(u)?;
                match tree.level(n).binary_search(&v) {
                    Ok(j) => {
                        let hit = LevelHit {
                            n,
                            x: bu.center.clone(),
                            word: Some(tree.letters(n, j)),
                        };
                        Ok(self.accept_hit(u, v, hit).unwrap_or(Fact::Unknown))
                    }
                    Err(_) => Ok(Fact::No),
                }
            }
            Mode::Shifts { levels, window } => {
                let level = levels.level(n);
                let w = *window as i64;
                let cu = seq_of(&bu.center);
                let cv = seq_of(&bv.center);
                let open: Vec<usize> = (0..level.len())
                    .filter(|&j| !shifted_conflict(cu, bu.radius, cv, bv.radius, level[j]))
                    .collect();
                if open.is_empty() {
                    return Ok(Fact::No);
                }
                for &j in &open {
                    let d = level[j];
                    let target = cv.shift(-d);
                    let q = forced_radius(bv.radius).unwrap_or(0);
                    for (lo, hi) in [(d - w, d + w), (d - q, d + q)] {
                        let hit = LevelHit {
                            n,
                            x: Point::Sigma2(cu.splice(&target, lo, hi)),
                            word: Some(levels.exponents(n, j, k)),
                        };
                        if let Some(f) = self.accept_hit(u, v, hit) {
                            return Ok(f);
                        }
                    }
                }
                for x in self.samples(u).iter() {
                    let s = seq_of(x);
                    for &j in &open {
                        if bv.contains(&Point::Sigma2(s.shift(level[j]))) {
                            let hit = LevelHit {
                                n,
                                x: x.clone(),
                                word: Some(levels.exponents(n, j, k)),
                            };
                            if let Some(f) = self.accept_hit(u, v, hit) {
                                return Ok(f);
                            }
                        }
                    }
                }
                Ok(Fact::Unknown)
            }
            Mode::Generic { .. } => {
                for (x, tree) in self.generic_orbits(u)?.iter() {
                    let Some(level) = tree.get_level(n) else {
                        continue;
                    };
                    if let Some(j) = level.iter().position(|y| bv.contains(y)) {
                        let hit = LevelHit {
                            n,
                            x: x.clone(),
                            word: Some(tree.letters(n, j)),
                        };
                        if let Some(f) = self.accept_hit(u, v, hit) {
                            return Ok(f);
                        }
                    }
                }
                Ok(Fact::Unknown)
            }
        }
    }

    /// Is there `x ∈ U` with `F^n(x) ⊆ V`?
    pub fn contain(&self, u: usize, v: usize, n: usize) -> Result<Fact> {
        let bu = self.cover.ball(u);
        let bv = self.cover.ball(v);
        match &self.mode {
            Mode::Angles(tree) => {
                let (start, len) = covering_arc(tree.level(n));
                if len >= 2.0 * bv.radius + MARGIN {
                    return Ok(Fact::No);
                }
                let h = bv.radius - len / 2.0;
                if h <= 0.0 {
                    return Ok(Fact::Unknown);
                }
                let cu = angle_of(&bu.center);
                let m = normalize_angle(angle_of(&bv.center) - start - len / 2.0);
                let delta = signed(m, cu);
                let reach = bu.radius + h;
                if delta.abs() >= reach + MARGIN {
                    return Ok(Fact::No);
                }
                if delta.abs() >= reach {
                    return Ok(Fact::Unknown);
                }
                let lo = (-bu.radius).max(delta - h);
                let hi = bu.radius.min(delta + h);
                let hit = LevelHit {
                    n,
                    x: Point::Circle(normalize_angle(cu + (lo + hi) / 2.0)),
                    word: None,
                };
                Ok(self.accept_contain(u, v, hit).unwrap_or(Fact::Unknown))
            }
            Mode::Table { .. } => {
                let tree = self.table_orbit(u)?;
                if tree.level(n) == [v] {
                    let hit = LevelHit {
                        n,
                        x: bu.center.clone(),
                        word: None,
                    };
                    Ok(self.accept_contain(u, v, hit).unwrap_or(Fact::Unknown))
                } else {
                    Ok(Fact::No)
                }
            }
            Mode::Shifts { levels, window } => {
                let level = levels.level(n);
                let cv = seq_of(&bv.center);
                if forced_symbols_conflict(level, cv, bv.radius) {
                    return Ok(Fact::No);
                }
                let w = *window as i64;
                let mut x = seq_of(&bu.center).clone();
                for &d in level {
                    x = x.splice(&cv.shift(-d), d - w, d + w);
                }
                let mut candidates = vec![Point::Sigma2(x)];
                candidates.extend(self.samples(u).iter().cloned());
                for x in candidates {
                    let s = seq_of(&x);
                    if level.iter().all(|&d| bv.contains(&Point::Sigma2(s.shift(d)))) {
                        let hit = LevelHit { n, x, word: None };
                        if let Some(f) = self.accept_contain(u, v, hit) {
                            return Ok(f);
                        }
                    }
                }
                Ok(Fact::Unknown)
            }
            Mode::Generic { .. } => {
                for (x, tree) in self.generic_orbits(u)?.iter() {
                    let Some(level) = tree.get_level(n) else {
                        continue;
                    };
                    if level.iter().all(|y| bv.contains(y)) {
                        let hit = LevelHit {
                            n,
                            x: x.clone(),
                            word: None,
                        };
                        if let Some(f) = self.accept_contain(u, v, hit) {
                            return Ok(f);
                        }
                    }
                }
                Ok(Fact::Unknown)
            }
        }
    }

    pub fn fact(&self, contain: bool, u: usize, v: usize, n: usize) -> Result<Fact> {
        if contain {
            self.contain(u, v, n)
        } else {
            self.hit(u, v, n)
        }
    }
}

/// Every `y` in the open ball `B(c, r)` agrees with `c` at each index `i`
/// with `2^{-|i|} >= r`. If `σ^d x` must lie in the ball for every `d` in
/// `level`, then `x_{d+i} = c_i` for all such `d, i`; a clash between two of
/// these constraints rules out every `x`.
pub(crate) fn forced_symbols_conflict(level: &[i64], c: &BiSeq, r: f64) -> bool {
    let Some(q) = forced_radius(r) else {
        return false;
    };
    if level.len() < 2 {
        return false;
    }
    let mut forced: HashMap<i64, u8> = HashMap::new();
    for &d in level {
        for i in -q..=q {
            let s = c.get(i);
            if *forced.entry(d + i).or_insert(s) != s {
                return true;
            }
        }
    }
    false
}

/// Largest `q` with `2^{-q} >= r`: members of `B(c, r)` agree with `c` on
/// `[-q, q]`.
pub(crate) fn forced_radius(r: f64) -> Option<i64> {
    if r > 1.0 {
        return None;
    }
    let mut q = 0i64;
    while 2f64.powi(-(q as i32 + 1)) >= r {
        q += 1;
    }
    Some(q)
}

/// No `x ∈ B(a, ra)` has `σ^d x ∈ B(b, rb)`: the symbols forced by the two
/// balls clash.
pub(crate) fn shifted_conflict(a: &BiSeq, ra: f64, b: &BiSeq, rb: f64, d: i64) -> bool {
    let (Some(qa), Some(qb)) = (forced_radius(ra), forced_radius(rb)) else {
        return false;
    };
    // x_i = a_i for |i| <= qa and x_{d+i} = b_i for |i| <= qb
    let lo = (-qa).max(d - qb);
    let hi = qa.min(d + qb);
    (lo..=hi).any(|i| a.get(i) != b.get(i - d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_pair_levels_cycle_with_period_two() {
        let t = angle_levels(&[PI / 4.0, 3.0 * PI / 4.0], 10, 1e-9).unwrap();
        assert_eq!(t.level(1).len(), 2);
        assert_eq!(t.level(2).len(), 3);
        assert_eq!(t.level(3).len(), 4);
        assert_eq!(t.level(4).len(), 4);
        // D_3 = odd multiples of π/4, D_4 = even ones, then alternation
        assert_eq!(t.cycle, Some(Cycle { start: 3, period: 2 }));
    }

    #[test]
    fn words_rebuild_their_displacement() {
        let gens = [0.7, 2.9];
        let t = angle_levels(&gens, 6, 1e-9).unwrap();
        for (j, &d) in t.level(6).iter().enumerate() {
            let Word::Exponents(e) = t.exponents(6, j, 2) else {
                unreachable!()
            };
            assert_eq!(e.iter().sum::<usize>(), 6);
            let sum = e[0] as f64 * gens[0] + e[1] as f64 * gens[1];
            assert!(arc(sum, d) < 1e-12);
        }
        let s = shift_levels(&[1, 2], 5).unwrap();
        assert_eq!(s.level(5), &[5, 6, 7, 8, 9, 10]);
        assert!(s.cycle.is_none());
    }

    #[test]
    fn covering_arc_examples() {
        let (s, l) = covering_arc(&[0.1, 0.2, 6.2]);
        assert!((s - 6.2).abs() < 1e-15);
        assert!((l - (TAU - 6.0)).abs() < 1e-12);
        assert_eq!(covering_arc(&[1.0]), (1.0, 0.0));
    }

    #[test]
    fn forced_symbols() {
        // radius 1/16 forces indices |i| <= 4
        let c = BiSeq::from_window(-4, &[1]).unwrap();
        assert!(forced_symbols_conflict(&[1, 2], &c, 0.0625));
        assert!(!forced_symbols_conflict(&[1, 2], &BiSeq::zeros(), 0.0625));
        assert!(!forced_symbols_conflict(&[3], &c, 0.0625));
    }
}
