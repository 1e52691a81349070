//! Finite families of self-maps and their n-fold images.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperspace::HSet;
use crate::spaces::{arc, epsilon_net, normalize_angle, Net, Point, Space, SpaceKind};

pub const DEFAULT_FRONTIER_CAP: usize = 1_000_000;
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// One member of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDescriptor {
    /// `θ ↦ θ + angle` on the circle.
    Rotation { angle: f64 },
    /// `σ^p` on Σ₂, where `(σx)_i = x_{i+1}`.
    ShiftPower { p: u32 },
    /// `t ↦ slope · min(t, 1 - t)` on the interval, `0 <= slope <= 2`.
    Tent { slope: f64 },
    /// `t ↦ 2t mod 1` on the interval.
    Doubling,
    /// A map of the `table.len()`-point net of the space into itself.
    TableMap { table: Vec<usize> },
}

impl MapDescriptor {
    pub fn rotation(angle: f64) -> Self {
        MapDescriptor::Rotation { angle }
    }

    pub fn shift(p: u32) -> Self {
        MapDescriptor::ShiftPower { p }
    }

    fn native_space(&self) -> Option<SpaceKind> {
        match self {
            MapDescriptor::Rotation { .. } => Some(SpaceKind::Circle),
            MapDescriptor::ShiftPower { .. } => Some(SpaceKind::Sigma2),
            MapDescriptor::Tent { .. } | MapDescriptor::Doubling => Some(SpaceKind::Interval),
            MapDescriptor::TableMap { .. } => None,
        }
    }

    pub fn validate(&self, space: &Space) -> Result<()> {
        if let Some(kind) = self.native_space() {
            if kind != space.kind {
                return Err(Error::input(format!(
                    "{self:?} acts on {kind}, not on {}",
                    space.kind
                )));
            }
        }
        match self {
            MapDescriptor::Rotation { angle } if !angle.is_finite() => {
                Err(Error::input("rotation angle must be finite"))
            }
            MapDescriptor::ShiftPower { p: 0 } => Err(Error::input("shift power must be >= 1")),
            MapDescriptor::Tent { slope } if !(0.0..=2.0).contains(slope) => {
                Err(Error::input("tent slope must lie in [0, 2]"))
            }
            MapDescriptor::TableMap { table } => {
                Net::with_len(space.kind, table.len())?;
                if let Some(bad) = table.iter().find(|&&j| j >= table.len()) {
                    return Err(Error::input(format!("table entry {bad} is off the net")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Evaluates the map at `x`.
    pub fn apply(&self, space: &Space, x: &Point) -> Result<Point> {
        space.check(x)?;
        match (self, x) {
            (MapDescriptor::Rotation { angle }, Point::Circle(t)) => {
                Ok(Point::Circle(normalize_angle(t + angle)))
            }
            (MapDescriptor::ShiftPower { p }, Point::Sigma2(s)) => {
                Ok(Point::Sigma2(s.shift(*p as i64)))
            }
            (MapDescriptor::Tent { slope }, Point::Interval(t)) => {
                Ok(Point::Interval((slope * t.min(1.0 - t)).clamp(0.0, 1.0)))
            }
            (MapDescriptor::Doubling, Point::Interval(t)) => {
                Ok(Point::Interval((2.0 * t).rem_euclid(1.0)))
            }
            (MapDescriptor::TableMap { table }, _) => {
                let net = Net::with_len(space.kind, table.len())?;
                let j = net.nearest(x);
                if !space.same_point(&net.point(j), x) {
                    return Err(Error::input(format!("{x} is not a point of the table net")));
                }
                Ok(net.point(table[j]))
            }
            _ => Err(Error::input(format!("{self:?} cannot act on {x}"))),
        }
    }

    /// Lipschitz constant when the map is Lipschitz on the whole space.
    pub fn lipschitz(&self) -> Option<f64> {
        match self {
            MapDescriptor::Rotation { .. } => Some(1.0),
            // (σx)_i = x_{i+1} reweights index j by 2^{-|j-1|} <= 2 · 2^{-|j|}
            MapDescriptor::ShiftPower { p } => Some(2f64.powi(*p as i32)),
            MapDescriptor::Tent { slope } => Some(*slope),
            MapDescriptor::Doubling | MapDescriptor::TableMap { .. } => None,
        }
    }

    pub fn is_isometry(&self) -> bool {
        matches!(self, MapDescriptor::Rotation { .. })
    }
}

/// Status of the commutativity property of a family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Commutativity {
    Unverified,
    VerifiedOnNet { eps: f64, tol: f64 },
    AssertedByUser,
}

/// `F = {f_1, ..., f_k}` acting on one space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RelationRepr", into = "RelationRepr")]
pub struct Relation {
    space: Space,
    maps: Vec<MapDescriptor>,
    commutativity: Commutativity,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationRepr {
    space: Space,
    maps: Vec<MapDescriptor>,
    #[serde(default = "unverified")]
    commutativity: Commutativity,
}

fn unverified() -> Commutativity {
    Commutativity::Unverified
}

impl TryFrom<RelationRepr> for Relation {
    type Error = Error;

    fn try_from(r: RelationRepr) -> Result<Self> {
        let mut rel = Relation::new(r.space, r.maps)?;
        rel.commutativity = r.commutativity;
        Ok(rel)
    }
}

impl From<Relation> for RelationRepr {
    fn from(r: Relation) -> Self {
        RelationRepr {
            space: r.space,
            maps: r.maps,
            commutativity: r.commutativity,
        }
    }
}

/// A composition of family members.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Word {
    /// `[i_1, ..., i_n]` is `f_{i_1} ∘ ... ∘ f_{i_n}` (0-based indices).
    Letters(Vec<usize>),
    /// Number of uses of each map; meaningful for commuting families only.
    Exponents(Vec<usize>),
}

impl Word {
    pub fn len(&self) -> usize {
        match self {
            Word::Letters(l) => l.len(),
            Word::Exponents(e) => e.iter().sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, rel: &Relation, x: &Point) -> Result<Point> {
        let mut y = x.clone();
        match self {
            Word::Letters(letters) => {
                for &i in letters.iter().rev() {
                    y = rel.map(i)?.apply(&rel.space, &y)?;
                }
            }
            Word::Exponents(exps) => {
                for (i, &e) in exps.iter().enumerate() {
                    let m = rel.map(i)?;
                    for _ in 0..e {
                        y = m.apply(&rel.space, &y)?;
                    }
                }
            }
        }
        Ok(y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutativityReport {
    pub ok: bool,
    pub max_deviation: f64,
    pub witness: Option<Point>,
    pub points_checked: usize,
}

/// Binomial coefficient, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

impl Relation {
    pub fn new(space: Space, maps: Vec<MapDescriptor>) -> Result<Self> {
        space.validate()?;
        if maps.is_empty() {
            return Err(Error::input("a family needs at least one map"));
        }
        for m in &maps {
            m.validate(&space)?;
        }
        Ok(Relation {
            space,
            maps,
            commutativity: Commutativity::Unverified,
        })
    }

    pub fn with_commutativity(mut self, c: Commutativity) -> Self {
        self.commutativity = c;
        self
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn maps(&self) -> &[MapDescriptor] {
        &self.maps
    }

    pub fn k(&self) -> usize {
        self.maps.len()
    }

    pub fn commutativity(&self) -> Commutativity {
        self.commutativity
    }

    pub fn is_commutative(&self) -> bool {
        !matches!(self.commutativity, Commutativity::Unverified)
    }

    fn map(&self, i: usize) -> Result<&MapDescriptor> {
        self.maps
            .get(i)
            .ok_or_else(|| Error::input(format!("map index {i} out of range")))
    }

    /// All maps are table maps, so the system lives on a finite net.
    pub fn table_net(&self) -> Option<Net> {
        let mut len = None;
        for m in &self.maps {
            match m {
                MapDescriptor::TableMap { table } => {
                    if len.is_some_and(|l| l != table.len()) {
                        return None;
                    }
                    len = Some(table.len());
                }
                _ => return None,
            }
        }
        len.and_then(|l| Net::with_len(self.space.kind, l).ok())
    }

    pub fn apply(&self, i: usize, x: &Point) -> Result<Point> {
        self.map(i)?.apply(&self.space, x)
    }

    /// `F(x) = {f_1(x), ..., f_k(x)}`.
    pub fn image(&self, x: &Point) -> Result<HSet> {
        let pts = self
            .maps
            .iter()
            .map(|m| m.apply(&self.space, x))
            .collect::<Result<Vec<_>>>()?;
        HSet::new(&self.space, pts)
    }

    /// `F^n(x)` by frontier iteration.
    pub fn n_fold_image(&self, n: usize, x: &Point) -> Result<HSet> {
        self.n_fold_image_capped(n, x, DEFAULT_FRONTIER_CAP)
    }

    pub fn n_fold_image_capped(&self, n: usize, x: &Point, cap: usize) -> Result<HSet> {
        if n == 0 {
            return Err(Error::input("n-fold images need n >= 1"));
        }
        let mut frontier = self.image(x)?;
        for _ in 1..n {
            frontier = self.step(&frontier, cap)?;
        }
        Ok(frontier)
    }

    /// `⋃_{y ∈ S} F(y)`.
    pub(crate) fn step(&self, set: &HSet, cap: usize) -> Result<HSet> {
        let requested = set.len() as u128 * self.k() as u128;
        if requested > cap as u128 {
            return Err(Error::Resource {
                what: "frontier",
                requested,
                cap,
            });
        }
        let mut next = Vec::with_capacity(requested as usize);
        for y in set.points() {
            for m in &self.maps {
                next.push(m.apply(&self.space, y)?);
            }
        }
        Ok(HSet::canonical(&self.space, next))
    }

    /// All words of length `n`; exponent vectors when commutativity is known.
    pub fn enumerate_words(&self, n: usize) -> Result<Vec<Word>> {
        self.enumerate_words_capped(n, DEFAULT_WORD_CAP)
    }

    pub fn enumerate_words_capped(&self, n: usize, cap: usize) -> Result<Vec<Word>> {
        if n == 0 {
            return Err(Error::input("words have length >= 1"));
        }
        let k = self.k();
        if self.is_commutative() {
            let count = binomial((n + k - 1) as u64, (k - 1) as u64);
            if count > cap as u128 {
                return Err(Error::Resource {
                    what: "word list",
                    requested: count,
                    cap,
                });
            }
            let mut out = Vec::with_capacity(count as usize);
            let mut exps = vec![0usize; k];
            compositions(n, 0, &mut exps, &mut out);
            Ok(out)
        } else {
            let count = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            if count > cap as u128 {
                return Err(Error::Resource {
                    what: "word list",
                    requested: count,
                    cap,
                });
            }
            let mut out = Vec::with_capacity(count as usize);
            for mut code in 0..count as usize {
                let mut letters = vec![0; n];
                for slot in letters.iter_mut().rev() {
                    *slot = code % k;
                    code /= k;
                }
                out.push(Word::Letters(letters));
            }
            Ok(out)
        }
    }

    /// Largest `d(f_i f_j x, f_j f_i x)` over a net; upgrades nothing by
    /// itself, see [`Relation::verify_commutativity`].
    pub fn check_commutativity(&self, eps: f64, tol: f64) -> Result<CommutativityReport> {
        let points = match self.table_net() {
            Some(net) => net.materialize(crate::spaces::DEFAULT_NET_CAP)?,
            None => epsilon_net(&self.space, eps)?,
        };
        let mut max_deviation = 0.0f64;
        let mut witness = None;
        for x in &points {
            for i in 0..self.k() {
                for j in i + 1..self.k() {
                    let a = self.apply(i, &self.apply(j, x)?)?;
                    let b = self.apply(j, &self.apply(i, x)?)?;
                    let d = a.distance_unchecked(&b);
                    if d > max_deviation {
                        max_deviation = d;
                        if d > tol && witness.is_none() {
                            witness = Some(x.clone());
                        }
                    }
                }
            }
        }
        Ok(CommutativityReport {
            ok: max_deviation <= tol,
            max_deviation,
            witness,
            points_checked: points.len(),
        })
    }

    /// Runs [`Relation::check_commutativity`] and records a success.
    pub fn verify_commutativity(&mut self, eps: f64, tol: f64) -> Result<CommutativityReport> {
        let report = self.check_commutativity(eps, tol)?;
        if report.ok {
            self.commutativity = Commutativity::VerifiedOnNet { eps, tol };
        }
        Ok(report)
    }

    /// Smallest `n <= n_max` with `x` within `tol` of `F^n(x)` (exactly in Σ₂).
    pub fn is_periodic_point(&self, x: &Point, n_max: usize, tol: f64) -> Result<Option<usize>> {
        if n_max == 0 {
            return Err(Error::input("n_max must be >= 1"));
        }
        self.space.check(x)?;
        let mut frontier = self.image(x)?;
        for n in 1..=n_max {
            if n > 1 {
                frontier = self.step(&frontier, DEFAULT_FRONTIER_CAP)?;
            }
            if returns_to(x, &frontier, tol) {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Translation structure of the family, when every map is a rotation or
    /// every map is a shift power.
    pub fn translations(&self) -> Option<Translations> {
        if let Some(angles) = self
            .maps
            .iter()
            .map(|m| match m {
                MapDescriptor::Rotation { angle } => Some(normalize_angle(*angle)),
                _ => None,
            })
            .collect::<Option<Vec<f64>>>()
        {
            return Some(Translations::Angles(angles));
        }
        self.maps
            .iter()
            .map(|m| match m {
                MapDescriptor::ShiftPower { p } => Some(*p as i64),
                _ => None,
            })
            .collect::<Option<Vec<i64>>>()
            .map(Translations::Shifts)
    }
}

pub(crate) fn returns_to(x: &Point, set: &HSet, tol: f64) -> bool {
    match x {
        Point::Sigma2(_) => set.points().iter().any(|y| y == x),
        _ => set.points().iter().any(|y| y.distance_unchecked(x) <= tol),
    }
}

fn compositions(remaining: usize, idx: usize, exps: &mut Vec<usize>, out: &mut Vec<Word>) {
    let k = exps.len();
    if idx == k - 1 {
        exps[idx] = remaining;
        out.push(Word::Exponents(exps.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        exps[idx] = e;
        compositions(remaining - e, idx + 1, exps, out);
    }
}

/// Generators of a family of translations of an abelian group.
#[derive(Debug, Clone, PartialEq)]
pub enum Translations {
    Angles(Vec<f64>),
    Shifts(Vec<i64>),
}

/// Level sets `D_n` of total displacements of length-`n` words, so that
/// `F^n(x) = {x + d : d ∈ D_n}` for a translation family.
#[derive(Debug, Clone, PartialEq)]
pub enum Displacements {
    Angles(Vec<Vec<f64>>),
    Shifts(Vec<Vec<i64>>),
}

impl Translations {
    pub fn displacements(&self, n_max: usize, tol: f64) -> Displacements {
        match self {
            Translations::Angles(gens) => {
                let mut levels: Vec<Vec<f64>> = Vec::with_capacity(n_max);
                let mut cur = vec![0.0];
                for _ in 0..n_max {
                    let mut next: Vec<f64> = cur
                        .iter()
                        .flat_map(|d| gens.iter().map(move |g| normalize_angle(d + g)))
                        .collect();
                    next.sort_by(f64::total_cmp);
                    let mut dedup: Vec<f64> = Vec::with_capacity(next.len());
                    for v in next {
                        if dedup.last().is_none_or(|&l| v - l > tol) {
                            dedup.push(v);
                        }
                    }
                    if dedup.len() > 1 && TAU - dedup[dedup.len() - 1] + dedup[0] <= tol {
                        dedup.pop();
                    }
                    levels.push(dedup.clone());
                    cur = dedup;
                }
                Displacements::Angles(levels)
            }
            Translations::Shifts(gens) => {
                let mut levels = Vec::with_capacity(n_max);
                let mut cur = vec![0i64];
                for _ in 0..n_max {
                    let mut next: Vec<i64> = cur
                        .iter()
                        .flat_map(|d| gens.iter().map(move |g| d + g))
                        .collect();
                    next.sort_unstable();
                    next.dedup();
                    levels.push(next.clone());
                    cur = next;
                }
                Displacements::Shifts(levels)
            }
        }
    }

    /// Largest distance between two generators; every `F^n(x)`, `n >= 1`,
    /// contains two points this far apart (swap one letter of a word).
    pub fn generator_spread(&self) -> f64 {
        match self {
            Translations::Angles(gens) => {
                let mut best = 0.0f64;
                for (i, a) in gens.iter().enumerate() {
                    for b in &gens[i + 1..] {
                        best = best.max(arc(*a, *b));
                    }
                }
                best
            }
            Translations::Shifts(_) => 0.0,
        }
    }
}

impl Displacements {
    pub fn n_max(&self) -> usize {
        match self {
            Displacements::Angles(l) => l.len(),
            Displacements::Shifts(l) => l.len(),
        }
    }

    pub fn level_len(&self, n: usize) -> usize {
        match self {
            Displacements::Angles(l) => l[n - 1].len(),
            Displacements::Shifts(l) => l[n - 1].len(),
        }
    }

    /// The `j`-th point of `F^n(x)` (not deduplicated against `x`).
    pub fn point(&self, x: &Point, n: usize, j: usize) -> Point {
        match (self, x) {
            (Displacements::Angles(l), Point::Circle(t)) => {
                Point::Circle(normalize_angle(t + l[n - 1][j]))
            }
            (Displacements::Shifts(l), Point::Sigma2(s)) => Point::Sigma2(s.shift(l[n - 1][j])),
            _ => panic!("displacements applied to a point of another space"),
        }
    }

    /// Diameter of `D_n` as a set of angles (zero for shift families).
    pub fn level_diameter(&self, n: usize) -> f64 {
        match self {
            Displacements::Angles(l) => circular_diameter(&l[n - 1]),
            Displacements::Shifts(_) => 0.0,
        }
    }
}

/// Largest pairwise arc distance of sorted angles.
pub(crate) fn circular_diameter(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let mut best = 0.0f64;
    for &a in sorted {
        let target = normalize_angle(a + std::f64::consts::PI);
        let pos = sorted.partition_point(|&v| v < target);
        for k in [pos + n - 1, pos, pos + 1] {
            best = best.max(arc(a, sorted[k % n]));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::BiSeq;
    use std::f64::consts::PI;

    fn circle(t: f64) -> Point {
        Point::circle(t).unwrap()
    }

    fn rational_pair() -> Relation {
        Relation::new(
            Space::circle(),
            vec![MapDescriptor::rotation(TAU / 8.0), MapDescriptor::rotation(6.0 * PI / 8.0)],
        )
        .unwrap()
    }

    fn shift_pair() -> Relation {
        Relation::new(Space::sigma2(), vec![MapDescriptor::shift(1), MapDescriptor::shift(2)])
            .unwrap()
    }

    fn angle(p: &Point) -> f64 {
        match p {
            Point::Circle(t) => *t,
            _ => unreachable!(),
        }
    }

    fn assert_angles(set: &HSet, expect: &[f64]) {
        assert_eq!(set.len(), expect.len(), "{set:?}");
        for (p, e) in set.points().iter().zip(expect) {
            assert!(arc(angle(p), *e) < 1e-12, "{p} vs {e}");
        }
    }

    #[test]
    fn apply_examples() {
        let s = Space::circle();
        let y = MapDescriptor::rotation(PI).apply(&s, &circle(1.5 * PI)).unwrap();
        assert!(arc(angle(&y), PI / 2.0) < 1e-15);
        let z = MapDescriptor::shift(1)
            .apply(&Space::sigma2(), &Point::Sigma2(BiSeq::zeros()))
            .unwrap();
        assert_eq!(z, Point::Sigma2(BiSeq::zeros()));
        let d = MapDescriptor::Doubling
            .apply(&Space::interval(), &Point::interval(0.3).unwrap())
            .unwrap();
        assert_eq!(d, Point::Interval(0.6));
        assert!(MapDescriptor::Doubling.apply(&Space::interval(), &circle(0.3)).is_err());
    }

    #[test]
    fn image_examples() {
        let rel = Relation::new(
            Space::circle(),
            vec![MapDescriptor::rotation(PI / 4.0), MapDescriptor::rotation(3.0 * PI / 4.0)],
        )
        .unwrap();
        assert_angles(&rel.image(&circle(0.0)).unwrap(), &[PI / 4.0, 3.0 * PI / 4.0]);
        let img = shift_pair().image(&Point::Sigma2(BiSeq::zeros())).unwrap();
        assert_eq!(img.points(), &[Point::Sigma2(BiSeq::zeros())]);
        let single = Relation::new(Space::circle(), vec![MapDescriptor::rotation(1.0)]).unwrap();
        assert_angles(&single.image(&circle(0.5)).unwrap(), &[1.5]);
    }

    #[test]
    fn n_fold_examples() {
        // words of length 2: 2p, p + q, q + p, 2q
        let two = rational_pair().n_fold_image(2, &circle(0.0)).unwrap();
        assert_angles(&two, &[PI / 2.0, PI, 1.5 * PI]);

        let single = Relation::new(Space::circle(), vec![MapDescriptor::rotation(0.4)]).unwrap();
        assert_angles(&single.n_fold_image(3, &circle(0.1)).unwrap(), &[1.3]);

        let x = Point::Sigma2(BiSeq::from_window(5, &[1]).unwrap());
        let three = shift_pair().n_fold_image(3, &x).unwrap();
        let mut expect: Vec<Point> = [2, 1, 0, -1]
            .iter()
            .map(|&o| Point::Sigma2(BiSeq::from_window(o, &[1]).unwrap()))
            .collect();
        expect.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(three.points(), expect.as_slice());
        assert!(shift_pair().n_fold_image(0, &x).is_err());
    }

    #[test]
    fn word_counts() {
        let rel = rational_pair();
        assert_eq!(rel.enumerate_words(2).unwrap().len(), 4);
        let comm = rel.clone().with_commutativity(Commutativity::AssertedByUser);
        let words = comm.enumerate_words(2).unwrap();
        assert_eq!(
            words,
            vec![
                Word::Exponents(vec![2, 0]),
                Word::Exponents(vec![1, 1]),
                Word::Exponents(vec![0, 2])
            ]
        );
        let single = Relation::new(Space::circle(), vec![MapDescriptor::rotation(1.0)]).unwrap();
        assert_eq!(single.enumerate_words(7).unwrap().len(), 1);
        assert!(rel.enumerate_words_capped(30, 1000).unwrap_err().is_resource());
    }

    #[test]
    fn commutativity_reports() {
        let mut rel = rational_pair();
        let report = rel.verify_commutativity(0.1, 1e-12).unwrap();
        assert!(report.ok);
        assert!(report.max_deviation < 1e-15);
        assert!(matches!(rel.commutativity(), Commutativity::VerifiedOnNet { .. }));

        let report = shift_pair().check_commutativity(0.5, 0.0).unwrap();
        assert!(report.ok);
        assert_eq!(report.max_deviation, 0.0);

        // f = (0 1 2) -> (1 1 2), g = (0 1 2) -> (0 2 2); f(g(0)) = 1, g(f(0)) = 2
        let tables = Relation::new(
            Space::circle(),
            vec![
                MapDescriptor::TableMap { table: vec![1, 1, 2] },
                MapDescriptor::TableMap { table: vec![0, 2, 2] },
            ],
        )
        .unwrap();
        let report = tables.check_commutativity(1.0, 1e-9).unwrap();
        assert!(!report.ok);
        assert_eq!(report.witness, Some(circle(0.0)));
        assert_eq!(report.points_checked, 3);
    }

    fn brute_force_period(angles: &[f64], n_max: usize, tol: f64) -> Option<usize> {
        // enumerate every word, not just exponent vectors
        for n in 1..=n_max.min(12) {
            let k = angles.len();
            for code in 0..k.pow(n as u32) {
                let mut c = code;
                let mut sum = 0.0;
                for _ in 0..n {
                    sum += angles[c % k];
                    c /= k;
                }
                if arc(sum, 0.0) <= tol {
                    return Some(n);
                }
            }
        }
        None
    }

    #[test]
    fn rational_pair_period_matches_word_oracle() {
        let oracle = brute_force_period(&[TAU / 8.0, 6.0 * PI / 8.0], 8, 1e-9);
        // 2·(π/4) + 2·(3π/4) = 2π
        assert_eq!(oracle, Some(4));
        let got = rational_pair().is_periodic_point(&circle(0.0), 8, 1e-9).unwrap();
        assert_eq!(got, oracle);
    }

    #[test]
    fn fixed_point_has_period_one() {
        let got = shift_pair()
            .is_periodic_point(&Point::Sigma2(BiSeq::ones()), 5, 0.0)
            .unwrap();
        assert_eq!(got, Some(1));
    }

    #[test]
    fn irrational_pair_has_no_short_period() {
        let a = TAU * (5f64.sqrt() - 1.0) / 2.0;
        let b = TAU * (2f64.sqrt() - 1.0);
        let rel =
            Relation::new(Space::circle(), vec![MapDescriptor::rotation(a), MapDescriptor::rotation(b)])
                .unwrap();
        // exhaustive exponent-vector search: a·α + (n-a)·β mod 2π for n <= 50
        let mut closest = f64::INFINITY;
        for n in 1..=50usize {
            for i in 0..=n {
                closest = closest.min(arc(i as f64 * a + (n - i) as f64 * b, 0.0));
            }
        }
        assert!(closest > 1e-6);
        assert_eq!(rel.is_periodic_point(&circle(0.0), 50, 1e-6).unwrap(), None);
    }

    #[test]
    fn displacement_levels_match_frontier() {
        let rel = rational_pair();
        let t = rel.translations().unwrap();
        let disp = t.displacements(6, 1e-9);
        for n in 1..=6 {
            let x = circle(0.3);
            let pts: Vec<Point> = (0..disp.level_len(n)).map(|j| disp.point(&x, n, j)).collect();
            let fast = HSet::new(rel.space(), pts).unwrap();
            assert!(fast.approx_eq(rel.space(), &rel.n_fold_image(n, &x).unwrap()));
        }
        assert!((t.generator_spread() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn circular_diameter_small_cases() {
        assert!((circular_diameter(&[0.0, PI / 2.0, PI, 1.5 * PI]) - PI).abs() < 1e-15);
        assert!((circular_diameter(&[0.1, 0.4]) - 0.3).abs() < 1e-15);
        assert_eq!(circular_diameter(&[1.0]), 0.0);
    }

    #[test]
    fn relation_json_round_trip() {
        let rel = rational_pair();
        let s = serde_json::to_string(&rel).unwrap();
        assert!(s.contains(r#""type":"rotation""#));
        assert!(s.contains(r#""commutativity":"unverified""#));
        let back: Relation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rel);
        let bad = r#"{"space":{"kind":"circle"},"maps":[{"type":"shift_power","p":1}]}"#;
        assert!(serde_json::from_str::<Relation>(bad).is_err());
    }
}
