//! Compact metric spaces, their points, epsilon-nets and ball covers.
//!
//! Three spaces are supported: the circle of circumference `2π` with the
//! shorter-arc metric, the unit interval with `|s - t|`, and the two-symbol
//! bi-infinite sequence space with `d(x, y) = sum_i |x_i - y_i| / 2^|i|`,
//! restricted to eventually-constant sequences so that every point has an
//! exact finite description.

mod biseq;
mod net;

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use biseq::BiSeq;
pub(crate) use biseq::{pow2neg, RawBiSeq};
pub use net::{ball_cover, epsilon_net, epsilon_net_size, BallCover, Net};

pub const DEFAULT_DEDUP_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_NET_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Circle,
    Interval,
    Sigma2,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Circle => "circle",
            SpaceKind::Interval => "interval",
            SpaceKind::Sigma2 => "sigma2",
        })
    }
}

fn default_dedup() -> f64 {
    DEFAULT_DEDUP_TOLERANCE
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Space {
    pub kind: SpaceKind,
    /// Points closer than this are identified in Circle and Interval. Sigma2
    /// compares canonical sequences exactly.
    #[serde(default = "default_dedup")]
    pub dedup_tolerance: f64,
}

impl Space {
    pub fn new(kind: SpaceKind) -> Self {
        Space {
            kind,
            dedup_tolerance: DEFAULT_DEDUP_TOLERANCE,
        }
    }

    pub fn circle() -> Self {
        Self::new(SpaceKind::Circle)
    }

    pub fn interval() -> Self {
        Self::new(SpaceKind::Interval)
    }

    pub fn sigma2() -> Self {
        Self::new(SpaceKind::Sigma2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dedup_tolerance.is_finite() && self.dedup_tolerance > 0.0 {
            Ok(())
        } else {
            Err(Error::input("dedup_tolerance must be positive and finite"))
        }
    }

    /// Largest possible distance between two points.
    pub fn diameter(&self) -> f64 {
        match self.kind {
            SpaceKind::Circle => PI,
            SpaceKind::Interval => 1.0,
            SpaceKind::Sigma2 => 3.0,
        }
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if p.kind() == self.kind {
            Ok(())
        } else {
            Err(Error::input(format!(
                "point of kind {} used in {} space",
                p.kind(),
                self.kind
            )))
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.distance_unchecked(b))
    }

    /// Equality up to the dedup tolerance (exact for Sigma2).
    pub fn same_point(&self, a: &Point, b: &Point) -> bool {
        match (a, b) {
            (Point::Sigma2(x), Point::Sigma2(y)) => x == y,
            _ => a.distance_unchecked(b) <= self.dedup_tolerance,
        }
    }
}

/// A point of one of the supported spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub enum Point {
    /// Angle in `[0, 2π)`.
    Circle(f64),
    /// Real in `[0, 1]`.
    Interval(f64),
    Sigma2(BiSeq),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum PointRepr {
    Circle {
        theta: f64,
    },
    Interval {
        t: f64,
    },
    Sigma2 {
        left: u8,
        #[serde(default)]
        core: Vec<u8>,
        right: u8,
        #[serde(default)]
        offset: i64,
    },
}

impl TryFrom<PointRepr> for Point {
    type Error = Error;

    fn try_from(repr: PointRepr) -> Result<Self> {
        match repr {
            PointRepr::Circle { theta } => Point::circle(theta),
            PointRepr::Interval { t } => Point::interval(t),
            PointRepr::Sigma2 {
                left,
                core,
                right,
                offset,
            } => Ok(Point::Sigma2(BiSeq::from_raw(RawBiSeq {
                left,
                core,
                right,
                offset,
            })?)),
        }
    }
}

impl From<Point> for PointRepr {
    fn from(p: Point) -> Self {
        match p {
            Point::Circle(theta) => PointRepr::Circle { theta },
            Point::Interval(t) => PointRepr::Interval { t },
            Point::Sigma2(s) => {
                let raw = s.to_raw();
                PointRepr::Sigma2 {
                    left: raw.left,
                    core: raw.core,
                    right: raw.right,
                    offset: raw.offset,
                }
            }
        }
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Shorter-arc distance between two angles.
pub fn arc(a: f64, b: f64) -> f64 {
    // a - b and b - a round to negatives of each other, so arc is symmetric
    let d = (a - b).abs().rem_euclid(TAU);
    d.min(TAU - d).max(0.0)
}

impl Point {
    pub fn circle(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::input("angle must be finite"));
        }
        Ok(Point::Circle(normalize_angle(theta)))
    }

    pub fn interval(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::input(format!("{t} is outside [0, 1]")));
        }
        Ok(Point::Interval(t))
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            Point::Circle(_) => SpaceKind::Circle,
            Point::Interval(_) => SpaceKind::Interval,
            Point::Sigma2(_) => SpaceKind::Sigma2,
        }
    }

    pub fn as_biseq(&self) -> Option<&BiSeq> {
        match self {
            Point::Sigma2(s) => Some(s),
            _ => None,
        }
    }

    /// Metric value; panics if the kinds differ.
    pub(crate) fn distance_unchecked(&self, other: &Point) -> f64 {
        match (self, other) {
            (Point::Circle(a), Point::Circle(b)) => arc(*a, *b),
            (Point::Interval(a), Point::Interval(b)) => (a - b).abs(),
            (Point::Sigma2(a), Point::Sigma2(b)) => a.distance(b),
            _ => panic!("distance between points of different spaces"),
        }
    }

    /// Total order used for canonical set storage: angle order, numeric
    /// order, or the canonical sequence order.
    pub fn canonical_cmp(&self, other: &Point) -> Ordering {
        match (self, other) {
            (Point::Circle(a), Point::Circle(b)) | (Point::Interval(a), Point::Interval(b)) => {
                a.total_cmp(b)
            }
            (Point::Sigma2(a), Point::Sigma2(b)) => a.cmp(b),
            _ => self.kind_rank().cmp(&other.kind_rank()),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Point::Circle(_) => 0,
            Point::Interval(_) => 1,
            Point::Sigma2(_) => 2,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Circle(t) => write!(f, "θ={t}"),
            Point::Interval(t) => write!(f, "t={t}"),
            Point::Sigma2(s) => {
                write!(f, "{}^∞ [", s.left())?;
                for c in s.core() {
                    write!(f, "{c}")?;
                }
                write!(f, "]@{} {}^∞", s.offset(), s.right())
            }
        }
    }
}

/// Open ball `{y : d(center, y) < radius}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::input("ball radius must be positive"));
        }
        Ok(Ball { center, radius })
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.kind() == self.center.kind() && self.center.distance_unchecked(p) < self.radius
    }

    /// Sufficient test for disjointness: `d(c1, c2) >= r1 + r2`.
    pub fn disjoint_from(&self, other: &Ball) -> bool {
        self.center.distance_unchecked(&other.center) >= self.radius + other.radius
    }
}
