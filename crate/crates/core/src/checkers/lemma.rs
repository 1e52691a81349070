//! Staged search for a point `u ∈ U` and levels `n_1 < n_2 < ...` with
//! `F^{n_r}(u) ⊆ S_{ρ_r}(x)`, so that `F^{n_r}(u) → {x}` in `(K(X), d_H)`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::engine::{angle_levels, covering_arc, MARGIN};
use super::{timed, Bounds, Certificate, CheckerName, LemmaWitness, Outcome, Verdict, Witness};
use crate::error::{Error, Result};
use crate::relation::{Relation, Translations};
use crate::spaces::{arc, Ball, Net, Point};

/// Candidate points tried per stage.
const CANDIDATE_CAP: usize = 512;
const IMAGE_CAP: usize = 100_000;
const SHRINK_STEPS: usize = 40;

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaParams {
    pub ball: Ball,
    pub target: Point,
    pub depth: usize,
    /// Stage `r` asks for images inside `S_{scale / r}(target)`.
    #[serde(default = "default_scale")]
    pub scale: f64,
}

impl LemmaParams {
    pub fn new(ball: Ball, target: Point, depth: usize) -> Self {
        LemmaParams {
            ball,
            target,
            depth,
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn radius(&self, stage: usize) -> f64 {
        self.scale / stage as f64
    }

    fn validate(&self, rel: &Relation) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::input("depth must be at least 1"));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::input(format!("scale must be positive, got {}", self.scale)));
        }
        rel.space().check(&self.ball.center)?;
        rel.space().check(&self.target)
    }
}

/// Largest distance from `target` over `F^n(u)`.
fn spread(rel: &Relation, n: usize, u: &Point, target: &Point) -> Result<f64> {
    let img = rel.n_fold_image_capped(n, u, IMAGE_CAP)?;
    Ok(img
        .points()
        .iter()
        .map(|y| y.distance_unchecked(target))
        .fold(0.0, f64::max))
}

/// Net points of `ball`, thinned to the cap, with the centre first.
fn candidates(rel: &Relation, ball: &Ball, spacing: f64) -> Result<Vec<Point>> {
    let mut out = vec![ball.center.clone()];
    let net = match rel.table_net() {
        Some(net) => net,
        None => Net::for_eps(rel.space(), spacing)?,
    };
    let inside: Vec<usize> = net
        .points_within(&ball.center, ball.radius)
        .into_iter()
        .filter(|&j| ball.contains(&net.point(j)))
        .collect();
    let stride = inside.len().div_ceil(CANDIDATE_CAP).max(1);
    out.extend(inside.into_iter().step_by(stride).map(|j| net.point(j)));
    out.dedup_by(|a, b| a.distance_unchecked(b) == 0.0);
    Ok(out)
}

struct Stage {
    n: usize,
    radius: f64,
}

fn meets_all(rel: &Relation, u: &Point, target: &Point, stages: &[Stage]) -> Result<bool> {
    for s in stages {
        if spread(rel, s.n, u, target)? >= s.radius {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest ball around `u` inside `outer` (halving from the room left in
/// `outer`) whose net points all meet every stage.
fn shrink(
    rel: &Relation,
    outer: &Ball,
    u: &Point,
    target: &Point,
    stages: &[Stage],
    spacing: f64,
) -> Result<Option<Ball>> {
    let room = outer.radius - u.distance_unchecked(&outer.center);
    let mut s = room;
    for _ in 0..SHRINK_STEPS {
        if s <= 0.0 {
            break;
        }
        let ball = Ball::new(u.clone(), s)?;
        let mut ok = true;
        for y in candidates(rel, &ball, spacing.min(s / 2.0))? {
            if !meets_all(rel, &y, target, stages)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(ball));
        }
        s /= 2.0;
    }
    Ok(None)
}

/// Certificate for a failing stage of a rotation family. For every level
/// `F^n(u) = u + D_n` with `previous < n <= n_max`, either `D_n` spans an arc
/// too long to fit in `S_radius(target)`, or the spread at the centre of
/// `ball` is so large that no `u` in the ball can bring it below `radius`
/// (the spread is 1-Lipschitz in `u`).
pub(crate) fn stage_certificate(
    rel: &Relation,
    bounds: &Bounds,
    previous: usize,
    radius: f64,
    ball: &Ball,
    target: &Point,
) -> Result<bool> {
    let Some(Translations::Angles(angles)) = rel.translations() else {
        return Ok(false);
    };
    let (Point::Circle(c), Point::Circle(x)) = (&ball.center, target) else {
        return Ok(false);
    };
    let tree = angle_levels(&angles, bounds.n_max, rel.space().dedup_tolerance)?;
    for n in previous + 1..=bounds.n_max {
        let level = tree.level(n);
        let (_, len) = covering_arc(level);
        if len >= 2.0 * radius + MARGIN {
            continue;
        }
        let spread = level.iter().map(|d| arc(c + d, *x)).fold(0.0, f64::max);
        if spread < radius + ball.radius + MARGIN {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_lemma1_convergence(
    rel: &Relation,
    params: &LemmaParams,
    bounds: &Bounds,
) -> Result<Verdict> {
    params.validate(rel)?;
    let json = json!({ "depth": params.depth, "scale": params.scale });
    timed(CheckerName::Lemma1Convergence, bounds, Some(json), || {
        let target = &params.target;
        let mut ball = params.ball.clone();
        let mut stages: Vec<Stage> = Vec::new();
        let mut u = ball.center.clone();
        for r in 1..=params.depth {
            let radius = params.radius(r);
            let previous = stages.last().map_or(0, |s| s.n);
            let spacing = bounds.net_eps().min(radius / 4.0);
            let pool = candidates(rel, &ball, spacing)?;
            let mut found: Option<(usize, Point, f64)> = None;
            'levels: for n in previous + 1..=bounds.n_max {
                for y in &pool {
                    let d = spread(rel, n, y, target)?;
                    if d < radius
                        && meets_all(rel, y, target, &stages)?
                        && found.as_ref().is_none_or(|f| d < f.2)
                    {
                        found = Some((n, y.clone(), d));
                    }
                }
                if found.is_some() {
                    break 'levels;
                }
            }
            let Some((n, y, _)) = found else {
                if stage_certificate(rel, bounds, previous, radius, &ball, target)? {
                    return Ok(Outcome::refuted(Witness::Refutation {
                        cover: None,
                        certificate: Certificate::LemmaStage {
                            stage: r,
                            previous_n: previous,
                            radius,
                            ball: ball.clone(),
                            target: target.clone(),
                        },
                    }));
                }
                return Ok(Outcome::inconclusive(Some(Witness::Unsettled {
                    note: format!("stage {r} found no level in ({previous}, {}]", bounds.n_max),
                })));
            };
            stages.push(Stage { n, radius });
            u = y;
            if r < params.depth {
                match shrink(rel, &ball, &u, target, &stages, spacing)? {
                    Some(b) => ball = b,
                    None => {
                        return Ok(Outcome::inconclusive(Some(Witness::Unsettled {
                            note: format!("stage {r} could not shrink the ball"),
                        })))
                    }
                }
            }
        }
        let distances = stages
            .iter()
            .map(|s| spread(rel, s.n, &u, target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Outcome::confirmed(Witness::Lemma(LemmaWitness {
            u,
            target: target.clone(),
            radii: stages.iter().map(|s| s.radius).collect(),
            levels: stages.iter().map(|s| s.n).collect(),
            distances,
        })))
    })
}
