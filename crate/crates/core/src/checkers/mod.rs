//! Bounded three-valued checkers for recurrence, mixing, periodicity and
//! sensitivity properties of a family.
//!
//! A checker never claims more than its bounds allow. `ConfirmedWithinBounds`
//! carries a witness that [`replay`] re-evaluates from scratch, and
//! `RefutedWithinBounds` carries a certificate (exact translation levels,
//! an exhaustive finite census, an isometry argument). Running out of search
//! budget gives `Inconclusive`.

mod engine;
mod lemma;
mod pairs;
mod periodic;
mod reach;
mod replay;
mod sensitivity;

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperspace::HSet;
use crate::relation::{Relation, Word};
use crate::spaces::{Ball, BallCover, Point, SpaceKind, DEFAULT_NET_CAP};

pub use lemma::{check_lemma1_convergence, LemmaParams};
pub use pairs::{
    EVIDENCE_CAP,
    check_super_topological_mixing, check_super_transitivity, check_super_weak_mixing,
    check_topological_mixing, check_transitivity, check_weak_mixing,
};
pub use periodic::{
    check_dense_periodicity_induced, check_dense_periodicity_relation, periodic_set_census,
    Census, PeriodicSet,
};
pub use reach::ReachGraph;
pub use replay::replay;
pub use sensitivity::check_sensitivity_induced;

/// Largest cover accepted by the two-pair (product) searches.
pub const PRODUCT_COVER_CAP: usize = 128;
/// Largest table net enumerated subset by subset.
pub const CENSUS_NET_CAP: usize = 20;

fn default_n_max() -> usize {
    200
}
fn default_cover_eps() -> f64 {
    0.1
}
fn default_tol() -> f64 {
    1e-6
}

/// Iteration horizon and resolutions for one checker run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_cover_eps")]
    pub cover_eps: f64,
    /// Defaults to `cover_eps / 4`.
    #[serde(default)]
    pub net_eps: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Cylinder window for covers of `Σ₂`; derived from `cover_eps` if unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            n_max: default_n_max(),
            cover_eps: default_cover_eps(),
            net_eps: None,
            tol: default_tol(),
            window: None,
        }
    }
}

impl Bounds {
    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn with_cover_eps(mut self, eps: f64) -> Self {
        self.cover_eps = eps;
        self
    }

    pub fn with_net_eps(mut self, eps: f64) -> Self {
        self.net_eps = Some(eps);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_window(mut self, window: u32) -> Self {
        self.window = Some(window);
        self
    }

    pub fn net_eps(&self) -> f64 {
        self.net_eps.unwrap_or(self.cover_eps / 4.0)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.n_max == 0 {
            return Err(Error::input("n_max must be positive"));
        }
        if !positive(self.cover_eps) || !positive(self.net_eps()) || !positive(self.tol) {
            return Err(Error::input("cover_eps, net_eps and tol must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    ConfirmedWithinBounds,
    RefutedWithinBounds,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ConfirmedWithinBounds => "ConfirmedWithinBounds",
            Status::RefutedWithinBounds => "RefutedWithinBounds",
            Status::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckerName {
    Transitivity,
    SuperTransitivity,
    WeakMixing,
    SuperWeakMixing,
    TopologicalMixing,
    SuperTopologicalMixing,
    DensePeriodicityRelation,
    DensePeriodicityInduced,
    SensitivityInduced,
    Lemma1Convergence,
}

impl CheckerName {
    pub const ALL: [CheckerName; 10] = [
        CheckerName::Transitivity,
        CheckerName::SuperTransitivity,
        CheckerName::WeakMixing,
        CheckerName::SuperWeakMixing,
        CheckerName::TopologicalMixing,
        CheckerName::SuperTopologicalMixing,
        CheckerName::DensePeriodicityRelation,
        CheckerName::DensePeriodicityInduced,
        CheckerName::SensitivityInduced,
        CheckerName::Lemma1Convergence,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckerName::Transitivity => "transitivity",
            CheckerName::SuperTransitivity => "super_transitivity",
            CheckerName::WeakMixing => "weak_mixing",
            CheckerName::SuperWeakMixing => "super_weak_mixing",
            CheckerName::TopologicalMixing => "topological_mixing",
            CheckerName::SuperTopologicalMixing => "super_topological_mixing",
            CheckerName::DensePeriodicityRelation => "dense_periodicity_relation",
            CheckerName::DensePeriodicityInduced => "dense_periodicity_induced",
            CheckerName::SensitivityInduced => "sensitivity_induced",
            CheckerName::Lemma1Convergence => "lemma1_convergence",
        }
    }

    /// Accepts snake_case and kebab-case spellings.
    pub fn parse(name: &str) -> Option<CheckerName> {
        let norm = name.replace('-', "_");
        Self::ALL.into_iter().find(|c| c.as_str() == norm)
    }

    /// Whether the pointwise-containment version of a property.
    pub fn is_super(&self) -> bool {
        matches!(
            self,
            CheckerName::SuperTransitivity
                | CheckerName::SuperWeakMixing
                | CheckerName::SuperTopologicalMixing
        )
    }
}

impl fmt::Display for CheckerName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `x ∈ U` and either `word(x) ∈ V` (hit) or `F^n(x) ⊆ V` (no word).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelHit {
    pub n: usize,
    pub x: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Word>,
}

/// Evidence for one ordered cover pair `(U, V)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEvidence {
    pub u: usize,
    pub v: usize,
    pub hits: Vec<LevelHit>,
}

/// Why no point of `U` can do what the property asks at the listed levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Translation family: `F^n(U) = U + D_n` misses `V` at every level, and
    /// the levels `D_n` repeat with the given period from `cycle_start` on.
    NeverReaches {
        u: usize,
        v: usize,
        cycle_start: usize,
        period: usize,
    },
    /// Same as `NeverReaches` for a finite table system, read off its graph.
    NoWalk { u: usize, v: usize },
    /// Translation family whose level `fail_level >= cycle_start` misses and
    /// therefore recurs with the period.
    RecurringMiss {
        u: usize,
        v: usize,
        fail_level: usize,
        cycle_start: usize,
        period: usize,
    },
    /// Two cover pairs that are never joined at a common level.
    NoCommonLevel {
        first: (usize, usize),
        second: (usize, usize),
        cycle_start: usize,
        period: usize,
    },
    /// No point of the space has `F^n(x)` inside `V` for `1 <= n <= n_max`:
    /// for rotations every `F^n(x)` spans an arc at least the ball diameter,
    /// for shift powers the ball forces contradictory symbols.
    NoContainment { u: usize, v: usize, n_max: usize },
    /// Every return displacement of length `<= n_max` stays farther than
    /// `tol` from zero, so no point of the ball is periodic within bounds.
    NoReturn { center: Point, min_return: f64 },
    /// Exhaustive census of the periodic subsets of a finite table net.
    NoNearbyPeriodicSet {
        seed: HSet,
        census: Census,
        min_distance: f64,
    },
    /// Every map is an isometry, so `F̄` never increases Hausdorff distance.
    Isometry,
    /// The Lemma construction fails at `stage`: no `u` in `ball` and no `n`
    /// in `(previous_n, n_max]` put `F^n(u)` inside `S_radius(target)`.
    LemmaStage {
        stage: usize,
        previous_n: usize,
        radius: f64,
        ball: Ball,
        target: Point,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// Pair evidence over a cover. For mixing checks `from_level` is the
    /// level `K` from which every level up to `n_max` is covered.
    Cover {
        cover: BallCover,
        pairs: Vec<PairEvidence>,
    },
    Refutation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cover: Option<BallCover>,
        certificate: Certificate,
    },
    /// A pair that could be neither joined nor certified.
    Unresolved {
        cover: BallCover,
        u: usize,
        v: usize,
    },
    /// Smallest return level for every net point.
    Periods { points: Vec<(Point, usize)> },
    /// One nearby periodic set per seed.
    PeriodicSets { entries: Vec<PeriodicEntry> },
    /// One separating perturbation per seed.
    Separations { entries: Vec<Separation> },
    Lemma(LemmaWitness),
    /// A point or seed the search could not settle.
    Unsettled { note: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicEntry {
    pub seed: HSet,
    pub set: HSet,
    pub n: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub seed: HSet,
    pub perturbed: HSet,
    pub n: usize,
    pub initial_distance: f64,
    pub separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaWitness {
    pub u: Point,
    pub target: Point,
    pub radii: Vec<f64>,
    pub levels: Vec<usize>,
    pub distances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub checker: CheckerName,
    pub status: Status,
    pub witness: Option<Witness>,
    pub bounds: Bounds,
    pub elapsed_ms: u64,
    /// Extra parameters the checker was called with (delta, lemma ball).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
}

impl Verdict {
    pub fn is_confirmed(&self) -> bool {
        self.status == Status::ConfirmedWithinBounds
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::RefutedWithinBounds
    }
}

pub(crate) struct Outcome {
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Outcome {
    pub fn confirmed(w: Witness) -> Self {
        Outcome {
            status: Status::ConfirmedWithinBounds,
            witness: Some(w),
        }
    }

    pub fn refuted(w: Witness) -> Self {
        Outcome {
            status: Status::RefutedWithinBounds,
            witness: Some(w),
        }
    }

    pub fn inconclusive(w: Option<Witness>) -> Self {
        Outcome {
            status: Status::Inconclusive,
            witness: w,
        }
    }
}

pub(crate) fn timed(
    checker: CheckerName,
    bounds: &Bounds,
    params: Option<serde_json::Value>,
    run: impl FnOnce() -> Result<Outcome>,
) -> Result<Verdict> {
    bounds.validate()?;
    let start = Instant::now();
    let outcome = run()?;
    Ok(Verdict {
        checker,
        status: outcome.status,
        witness: outcome.witness,
        bounds: *bounds,
        elapsed_ms: start.elapsed().as_millis() as u64,
        params,
    })
}

/// Cover used by the pair-based checkers: one ball per table point for
/// table systems, cylinders on `Σ₂`, and [`crate::spaces::ball_cover`]
/// otherwise.
pub fn checker_cover(rel: &Relation, bounds: &Bounds) -> Result<BallCover> {
    if let Some(net) = rel.table_net() {
        let len = net.len_capped(DEFAULT_NET_CAP)?;
        let spacing = if len > 1 {
            net.point(0).distance_unchecked(&net.point(1))
        } else {
            rel.space().diameter()
        };
        let radius = match net {
            crate::spaces::Net::Sigma2 { window } => crate::spaces::pow2neg(window as i64 + 1),
            _ => spacing / 2.0,
        };
        return Ok(BallCover::discrete(net, radius));
    }
    match rel.space().kind {
        SpaceKind::Sigma2 => {
            let window = bounds.window.unwrap_or_else(|| {
                // smallest w with 2^{1-w} <= cover_eps
                let mut w = 0u32;
                while 2f64.powi(1 - w as i32) > bounds.cover_eps && w < 40 {
                    w += 1;
                }
                w
            });
            BallCover::cylinders(rel.space(), window, DEFAULT_NET_CAP)
        }
        _ => BallCover::uniform(rel.space(), bounds.cover_eps, DEFAULT_NET_CAP),
    }
}
