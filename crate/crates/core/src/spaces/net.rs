use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{arc, pow2neg, Ball, BiSeq, Point, Space, SpaceKind, DEFAULT_NET_CAP};
use crate::error::{Error, Result};

/// A structured finite point set: equally spaced angles, equally spaced
/// reals, or all zero-tailed sequences supported on `[-window, window]`.
///
/// Nets are described, not stored, so membership queries run without
/// materializing every point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Net {
    Circle { m: usize },
    Interval { m: usize },
    Sigma2 { window: u32 },
}

/// `ceil(x)`, snapping values within rounding noise of an integer.
fn snapped_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x.ceil()
    }
}

impl Net {
    /// Net with every point of the space within `eps` of a net point.
    pub fn for_eps(space: &Space, eps: f64) -> Result<Net> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::input("net spacing must be positive"));
        }
        Ok(match space.kind {
            SpaceKind::Circle => Net::Circle {
                m: snapped_ceil(TAU / eps).max(1.0) as usize,
            },
            SpaceKind::Interval => Net::Interval {
                m: snapped_ceil(1.0 / eps).max(1.0) as usize + 1,
            },
            SpaceKind::Sigma2 => {
                let l = snapped_ceil((2.0 / eps).log2()).max(0.0) + 1.0;
                Net::Sigma2 {
                    window: l.min(1e6) as u32,
                }
            }
        })
    }

    /// Net with exactly `len` points (used by table maps).
    pub fn with_len(kind: SpaceKind, len: usize) -> Result<Net> {
        match kind {
            SpaceKind::Circle if len >= 1 => Ok(Net::Circle { m: len }),
            SpaceKind::Interval if len >= 2 => Ok(Net::Interval { m: len }),
            SpaceKind::Sigma2 if len.is_power_of_two() && len.trailing_zeros() % 2 == 1 => {
                Ok(Net::Sigma2 {
                    window: (len.trailing_zeros() - 1) / 2,
                })
            }
            _ => Err(Error::input(format!("no {kind} net has {len} points"))),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            Net::Circle { .. } => SpaceKind::Circle,
            Net::Interval { .. } => SpaceKind::Interval,
            Net::Sigma2 { .. } => SpaceKind::Sigma2,
        }
    }

    /// Number of points, computed without materializing them.
    pub fn size(&self) -> u128 {
        match *self {
            Net::Circle { m } | Net::Interval { m } => m as u128,
            Net::Sigma2 { window } => {
                let bits = 2 * window as u128 + 1;
                if bits >= 127 {
                    u128::MAX
                } else {
                    1u128 << bits
                }
            }
        }
    }

    /// Size as usize, or a resource error if it exceeds `cap`.
    pub fn len_capped(&self, cap: usize) -> Result<usize> {
        let size = self.size();
        if size > cap as u128 {
            Err(Error::Resource {
                what: "epsilon-net",
                requested: size,
                cap,
            })
        } else {
            Ok(size as usize)
        }
    }

    pub fn point(&self, j: usize) -> Point {
        match *self {
            Net::Circle { m } => Point::Circle(TAU * j as f64 / m as f64),
            Net::Interval { m } => Point::Interval(j as f64 / (m - 1) as f64),
            Net::Sigma2 { window } => {
                let w = window as i64;
                let bits: Vec<u8> = (0..=2 * w).map(|b| ((j >> b) & 1) as u8).collect();
                Point::Sigma2(BiSeq::from_window(-w, &bits).expect("bits are symbols"))
            }
        }
    }

    pub fn materialize(&self, cap: usize) -> Result<Vec<Point>> {
        let n = self.len_capped(cap)?;
        Ok((0..n).map(|j| self.point(j)).collect())
    }

    /// Index of a net point closest to `q` (for Sigma2: the one agreeing
    /// with `q` on the window).
    pub fn nearest(&self, q: &Point) -> usize {
        match (*self, q) {
            (Net::Circle { m }, Point::Circle(t)) => {
                (t / (TAU / m as f64)).round() as usize % m
            }
            (Net::Interval { m }, Point::Interval(t)) => {
                ((t * (m - 1) as f64).round() as usize).min(m - 1)
            }
            (Net::Sigma2 { window }, Point::Sigma2(s)) => window_index(window, s),
            _ => panic!("net and point belong to different spaces"),
        }
    }

    /// Sorted indices of the net points `p` with `d(p, q) < r`.
    pub fn points_within(&self, q: &Point, r: f64) -> Vec<usize> {
        let mut out = match (*self, q) {
            (Net::Circle { m }, Point::Circle(t)) => {
                let h = TAU / m as f64;
                let c = (t / h).round() as i64;
                let span = ((r / h).ceil() as i64 + 1).min(m as i64);
                let mut v: Vec<usize> = (c - span..=c + span)
                    .map(|k| k.rem_euclid(m as i64) as usize)
                    .filter(|&j| arc(*t, h * j as f64) < r)
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            }
            (Net::Interval { m }, Point::Interval(t)) => {
                let h = 1.0 / (m - 1) as f64;
                let c = (t / h).round() as i64;
                let span = (r / h).ceil() as i64 + 1;
                let lo = (c - span).max(0);
                let hi = (c + span).min(m as i64 - 1);
                (lo..=hi)
                    .map(|j| j as usize)
                    .filter(|&j| (t - h * j as f64).abs() < r)
                    .collect()
            }
            (Net::Sigma2 { window }, Point::Sigma2(s)) => sigma2_within(window, s, r),
            _ => panic!("net and point belong to different spaces"),
        };
        out.sort_unstable();
        out
    }
}

fn window_index(window: u32, s: &BiSeq) -> usize {
    let w = window as i64;
    (0..=2 * w).fold(0usize, |acc, b| acc | ((s.get(b - w) as usize) << b))
}

/// Enumerates window patterns whose flipped positions weigh less than the
/// remaining budget, then confirms each candidate with the exact metric.
fn sigma2_within(window: u32, q: &BiSeq, r: f64) -> Vec<usize> {
    let w = window as i64;
    let truncated = q.truncate(w);
    let budget = r - q.distance(&truncated);
    if budget <= 0.0 {
        return Vec::new();
    }
    let base = window_index(window, q);
    // Positions ordered by decreasing weight.
    let mut positions: Vec<(usize, f64)> = (-w..=w)
        .map(|i| ((i + w) as usize, pow2neg(i.abs())))
        .collect();
    positions.sort_by(|a, b| b.1.total_cmp(&a.1));

    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize, f64)> = vec![(0, 0, 0.0)];
    while let Some((from, mask, used)) = stack.pop() {
        out.push(base ^ mask);
        for (k, &(bit, weight)) in positions.iter().enumerate().skip(from) {
            if used + weight < budget + 1e-12 {
                stack.push((k + 1, mask | (1 << bit), used + weight));
            }
        }
    }
    let net = Net::Sigma2 { window };
    let qp = Point::Sigma2(q.clone());
    out.retain(|&j| net.point(j).distance_unchecked(&qp) < r);
    out
}

/// Every point of the space lies within `eps` of one of the returned points.
pub fn epsilon_net(space: &Space, eps: f64) -> Result<Vec<Point>> {
    Net::for_eps(space, eps)?.materialize(DEFAULT_NET_CAP)
}

/// Size of [`epsilon_net`] without materializing it.
pub fn epsilon_net_size(space: &Space, eps: f64) -> Result<u128> {
    Ok(Net::for_eps(space, eps)?.size())
}

/// Finitely many open balls of a common radius covering the space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCover {
    pub centers: Net,
    pub radius: f64,
}

/// Balls of radius `eps` centred on the `eps / 2` net.
pub fn ball_cover(space: &Space, eps: f64) -> Result<BallCover> {
    BallCover::uniform(space, eps, DEFAULT_NET_CAP)
}

impl BallCover {
    pub fn uniform(space: &Space, eps: f64, cap: usize) -> Result<BallCover> {
        let centers = Net::for_eps(space, eps / 2.0)?;
        centers.len_capped(cap)?;
        let cover = BallCover {
            centers,
            radius: eps,
        };
        cover.verify(space, eps / 4.0, cap)?;
        Ok(cover)
    }

    /// Cylinder cover of `Σ₂`: one ball per pattern on `[-window, window]`,
    /// radius `2^{1 - window}`.
    pub fn cylinders(space: &Space, window: u32, cap: usize) -> Result<BallCover> {
        if space.kind != SpaceKind::Sigma2 {
            return Err(Error::input("cylinder covers exist only on sigma2"));
        }
        let centers = Net::Sigma2 { window };
        centers.len_capped(cap)?;
        let radius = 2.0 * pow2neg(window as i64);
        let cover = BallCover { centers, radius };
        cover.verify(space, radius / 2.0, cap)?;
        Ok(cover)
    }

    /// Cover with one ball per point of a discrete net, each ball holding
    /// exactly that point.
    pub fn discrete(net: Net, radius: f64) -> BallCover {
        BallCover {
            centers: net,
            radius,
        }
    }

    /// Checks that each point of the `spacing` net lies in some ball.
    pub fn verify(&self, space: &Space, spacing: f64, cap: usize) -> Result<()> {
        let mut net = Net::for_eps(space, spacing)?;
        if net.size() > cap as u128 {
            // Fall back to the coarsest spacing the invariant asks for.
            net = Net::for_eps(space, self.radius / 2.0)?;
        }
        let n = net.len_capped(cap)?;
        for j in 0..n {
            let p = net.point(j);
            let near = self.centers.nearest(&p);
            if self.centers.point(near).distance_unchecked(&p) < self.radius {
                continue;
            }
            if self.centers.points_within(&p, self.radius).is_empty() {
                return Err(Error::input(format!("cover misses net point {p}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.centers.size().min(usize::MAX as u128) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ball(&self, i: usize) -> Ball {
        Ball {
            center: self.centers.point(i),
            radius: self.radius,
        }
    }

    pub fn balls(&self) -> impl Iterator<Item = Ball> + '_ {
        (0..self.len()).map(|i| self.ball(i))
    }

    /// Indices of the balls containing `p`, ascending.
    pub fn containing(&self, p: &Point) -> Vec<usize> {
        self.centers.points_within(p, self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_net_sizes() {
        assert_eq!(epsilon_net(&Space::circle(), PI).unwrap().len(), 2);
        assert_eq!(epsilon_net(&Space::circle(), 0.1).unwrap().len(), 63);
        let pts = epsilon_net(&Space::circle(), PI).unwrap();
        assert_eq!(pts, vec![Point::Circle(0.0), Point::Circle(PI)]);
    }

    #[test]
    fn interval_net_half() {
        let pts = epsilon_net(&Space::interval(), 0.5).unwrap();
        assert_eq!(
            pts,
            vec![Point::Interval(0.0), Point::Interval(0.5), Point::Interval(1.0)]
        );
    }

    #[test]
    fn sigma2_net_window() {
        // L = ceil(log2(2 / 0.5)) + 1 = 3
        assert_eq!(Net::for_eps(&Space::sigma2(), 0.5).unwrap(), Net::Sigma2 { window: 3 });
        assert_eq!(epsilon_net_size(&Space::sigma2(), 0.5).unwrap(), 128);
    }

    #[test]
    fn oversized_net_is_a_resource_error() {
        let err = epsilon_net(&Space::sigma2(), 1e-4).unwrap_err();
        assert!(err.is_resource());
        assert!(err.to_string().contains("1000000"));
        assert!(epsilon_net(&Space::circle(), 0.0).is_err());
    }

    #[test]
    fn circle_cover_of_pi_has_four_balls() {
        let cover = ball_cover(&Space::circle(), PI).unwrap();
        // centers on the π/2 net: ceil(2π / (π/2)) = 4
        assert_eq!(cover.len(), 4);
        assert_eq!(cover.radius, PI);
    }

    #[test]
    fn interval_cover_of_one_has_a_middle_ball() {
        let cover = ball_cover(&Space::interval(), 1.0).unwrap();
        let mid = cover
            .balls()
            .find(|b| b.center == Point::Interval(0.5))
            .expect("ball at 0.5");
        for j in 0..=100 {
            assert!(mid.contains(&Point::Interval(j as f64 / 100.0)));
        }
    }

    #[test]
    fn covers_contain_the_quarter_net() {
        for (space, eps) in [
            (Space::circle(), 0.3),
            (Space::interval(), 0.2),
            (Space::sigma2(), 0.5),
        ] {
            let cover = ball_cover(&space, eps).unwrap();
            for p in epsilon_net(&space, eps / 4.0).unwrap() {
                assert!(cover.balls().any(|b| b.contains(&p)), "{p} uncovered");
            }
        }
    }

    #[test]
    fn points_within_agrees_with_a_scan() {
        for (space, eps, r) in [
            (Space::circle(), 0.2, 0.35),
            (Space::interval(), 0.1, 0.23),
            (Space::sigma2(), 0.3, 0.4),
        ] {
            let net = Net::for_eps(&space, eps).unwrap();
            let pts = net.materialize(1 << 20).unwrap();
            for q in pts.iter().step_by(7).chain(epsilon_net(&space, 0.9).unwrap().iter()) {
                let expect: Vec<usize> = (0..pts.len())
                    .filter(|&j| pts[j].distance_unchecked(q) < r)
                    .collect();
                assert_eq!(net.points_within(q, r), expect, "query {q}");
            }
        }
    }

    #[test]
    fn cylinder_cover_window_two() {
        let cover = BallCover::cylinders(&Space::sigma2(), 2, DEFAULT_NET_CAP).unwrap();
        assert_eq!(cover.len(), 32);
        assert_eq!(cover.radius, 0.5);
    }

    #[test]
    fn table_net_lengths() {
        assert_eq!(Net::with_len(SpaceKind::Circle, 8).unwrap(), Net::Circle { m: 8 });
        assert_eq!(Net::with_len(SpaceKind::Sigma2, 8).unwrap(), Net::Sigma2 { window: 1 });
        assert!(Net::with_len(SpaceKind::Sigma2, 16).is_err());
        assert!(Net::with_len(SpaceKind::Interval, 1).is_err());
    }
}
