//! Built-in families and reproducible experiments with frozen expectations.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::checkers::{
    check_dense_periodicity_induced, check_dense_periodicity_relation, check_sensitivity_induced,
    check_super_transitivity, check_transitivity, checker_cover, periodic_set_census, Bounds,
    CheckerName, ReachGraph, Status, Verdict,
};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, induced_map, HSet};
use crate::relation::{MapDescriptor, Relation};
use crate::spaces::{BiSeq, Point, Space};

pub const DEFAULT_SEED: u64 = 20_240_611;

pub const GOLDEN_ANGLE: f64 = TAU * 0.618_033_988_749_894_9;
pub const SILVER_ANGLE: f64 = TAU * 0.414_213_562_373_095_1;

fn rotations(angles: &[f64]) -> Relation {
    Relation::new(
        Space::circle(),
        angles.iter().map(|&a| MapDescriptor::rotation(a)).collect(),
    )
    .expect("finite angles")
}

/// `θ ↦ θ + 2π/8` and `θ ↦ θ + 6π/8`.
pub fn rational_pair() -> Relation {
    rotations(&[TAU / 8.0, 6.0 * PI / 8.0])
}

/// The rational pair acting on the eight points `2πj/8`.
pub fn rational_pair_z8() -> Relation {
    let table = |s: usize| MapDescriptor::TableMap {
        table: (0..8).map(|j| (j + s) % 8).collect(),
    };
    Relation::new(Space::circle(), vec![table(1), table(3)]).expect("valid tables")
}

pub fn golden_rotation() -> Relation {
    rotations(&[GOLDEN_ANGLE])
}

pub fn silver_rotation() -> Relation {
    rotations(&[SILVER_ANGLE])
}

pub fn irrational_pair() -> Relation {
    rotations(&[GOLDEN_ANGLE, SILVER_ANGLE])
}

/// `{σ, σ²}` on `Σ₂`.
pub fn shift_pair() -> Relation {
    Relation::new(Space::sigma2(), vec![MapDescriptor::shift(1), MapDescriptor::shift(2)])
        .expect("valid shifts")
}

pub fn doubling() -> Relation {
    Relation::new(Space::interval(), vec![MapDescriptor::Doubling]).expect("valid map")
}

pub fn tent_pair() -> Relation {
    Relation::new(
        Space::interval(),
        vec![
            MapDescriptor::Tent { slope: 2.0 },
            MapDescriptor::Tent { slope: 1.5 },
        ],
    )
    .expect("valid slopes")
}

/// Every built-in family by name.
pub fn builtin_families() -> Vec<(&'static str, Relation)> {
    vec![
        ("rational-pair", rational_pair()),
        ("rational-pair-z8", rational_pair_z8()),
        ("golden-rotation", golden_rotation()),
        ("silver-rotation", silver_rotation()),
        ("irrational-pair", irrational_pair()),
        ("shift-pair", shift_pair()),
        ("doubling", doubling()),
        ("tent-pair", tent_pair()),
    ]
}

pub fn builtin_family(name: &str) -> Option<Relation> {
    builtin_families()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, r)| r)
}

/// What an experiment expects of one computed quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Status(Status),
    NotConfirmed,
    Holds,
}

impl Expected {
    fn describe(&self) -> String {
        match self {
            Expected::Status(s) => s.to_string(),
            Expected::NotConfirmed => "not ConfirmedWithinBounds".into(),
            Expected::Holds => "holds".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub label: String,
    pub expected: Expected,
    pub actual: String,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledVerdict {
    pub label: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub seed: u64,
    pub expectations: Vec<Expectation>,
    pub verdicts: Vec<LabeledVerdict>,
    pub details: Value,
}

impl Report {
    fn new(name: &str, seed: u64) -> Self {
        Report {
            name: name.into(),
            seed,
            expectations: Vec::new(),
            verdicts: Vec::new(),
            details: json!({}),
        }
    }

    pub fn passed(&self) -> bool {
        self.expectations.iter().all(|e| e.matched)
    }

    pub fn mismatches(&self) -> Vec<&Expectation> {
        self.expectations.iter().filter(|e| !e.matched).collect()
    }

    fn verdict(&mut self, label: &str, expected: Expected, verdict: Verdict) {
        let matched = match expected {
            Expected::Status(s) => verdict.status == s,
            Expected::NotConfirmed => verdict.status != Status::ConfirmedWithinBounds,
            Expected::Holds => unreachable!("verdict expectations name a status"),
        };
        self.expectations.push(Expectation {
            label: label.into(),
            expected,
            actual: verdict.status.to_string(),
            matched,
        });
        self.verdicts.push(LabeledVerdict {
            label: label.into(),
            verdict,
        });
    }

    fn fact(&mut self, label: &str, holds: bool, actual: String) {
        self.expectations.push(Expectation {
            label: label.into(),
            expected: Expected::Holds,
            actual,
            matched: holds,
        });
    }

    fn detail(&mut self, key: &str, value: Value) {
        self.details[key] = value;
    }

    /// One line per expectation, for terminal output and diffs.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for e in &self.expectations {
            out.push_str(&format!(
                "{} {}: expected {}, got {}\n",
                if e.matched { "ok  " } else { "FAIL" },
                e.label,
                e.expected.describe(),
                e.actual
            ));
        }
        out
    }
}

/// Names accepted by [`run_experiment`].
pub const EXPERIMENTS: [&str; 3] = ["rational-rotations", "irrational-rotations", "shift-sensitivity"];

/// Runs one experiment, or all of them; every report records `seed`.
pub fn run_experiment(name: &str, seed: u64) -> Result<Vec<Report>> {
    let mut reports = match name {
        "rational-rotations" => Ok(vec![exp_rational_rotation_pair()?]),
        "irrational-rotations" => Ok(vec![exp_irrational_rotation_pair()?]),
        "shift-sensitivity" => Ok(vec![exp_shift_family_sensitivity(seed)?]),
        "all" => Ok(vec![
            exp_rational_rotation_pair()?,
            exp_irrational_rotation_pair()?,
            exp_shift_family_sensitivity(seed)?,
        ]),
        other => Err(Error::input(format!(
            "unknown experiment {other:?}; expected one of {} or all",
            EXPERIMENTS.join(", ")
        ))),
    }?;
    for r in &mut reports {
        r.seed = seed;
    }
    Ok(reports)
}

/// Every point `x` of the net has `x ∈ F^8(x)`.
fn returns_at(rel: &Relation, bounds: &Bounds, n: usize) -> Result<bool> {
    let net = crate::spaces::epsilon_net(rel.space(), bounds.net_eps())?;
    for x in &net {
        let img = rel.n_fold_image(n, x)?;
        if !img.points().iter().any(|y| y.distance_unchecked(x) <= bounds.tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn exp_rational_rotation_pair() -> Result<Report> {
    let mut report = Report::new("rational-rotations", DEFAULT_SEED);
    let bounds = Bounds::default();
    let mut rel = rational_pair();
    let comm = rel.verify_commutativity(bounds.net_eps(), 1e-9)?;
    report.fact(
        "maps commute on the net",
        comm.ok,
        format!("max deviation {:e} over {} points", comm.max_deviation, comm.points_checked),
    );

    let periodic = check_dense_periodicity_relation(&rel, &bounds)?;
    report.verdict(
        "dense periodic points of F",
        Expected::Status(Status::ConfirmedWithinBounds),
        periodic,
    );
    let eight = returns_at(&rel, &bounds, 8)?;
    report.fact("x ∈ F^8(x) at every net point", eight, eight.to_string());

    let z8 = rational_pair_z8();
    let z8_bounds = Bounds::default().with_net_eps(0.3);
    let seeds: Vec<HSet> = (0..8)
        .map(|j| HSet::singleton(Point::Circle(TAU * j as f64 / 8.0)))
        .collect();
    let induced = check_dense_periodicity_induced(&z8, &z8_bounds, &seeds)?;
    report.verdict(
        "dense periodic sets of the induced map on Z8",
        Expected::Status(Status::RefutedWithinBounds),
        induced,
    );
    let census = periodic_set_census(&z8)?;
    let zero = HSet::singleton(Point::Circle(0.0));
    let net = z8.table_net().expect("table family");
    let mut min_distance = f64::INFINITY;
    for ps in &census.periodic {
        let b = HSet::new(z8.space(), ps.members.iter().map(|&j| net.point(j)).collect())?;
        min_distance = min_distance.min(hausdorff_distance(z8.space(), &zero, &b)?);
    }
    report.detail("census", serde_json::to_value(&census).expect("serializable"));
    report.detail("min_distance_from_zero", json!(min_distance));
    report.fact(
        "every periodic set is far from {0}",
        min_distance > z8_bounds.net_eps(),
        format!("min d_H = {min_distance}"),
    );

    let sup = check_super_transitivity(&rel, &bounds)?;
    report.verdict("super-transitivity", Expected::NotConfirmed, sup.clone());

    let swapped = rotations(&[6.0 * PI / 8.0, TAU / 8.0]);
    let a = check_dense_periodicity_relation(&swapped, &bounds)?;
    let b = check_super_transitivity(&swapped, &bounds)?;
    let same = a.status == report.verdicts[0].verdict.status && b.status == sup.status;
    report.fact(
        "swapping the angles leaves the verdicts unchanged",
        same,
        format!("{} / {}", a.status, b.status),
    );
    Ok(report)
}

/// Balls of `cover` visited by the orbit `x + nα`, `1 <= n <= n_max`.
fn orbit_visits(rel: &Relation, cover: &crate::spaces::BallCover, x: &Point, n_max: usize) -> Result<Vec<bool>> {
    let mut seen = vec![false; cover.len()];
    let mut y = x.clone();
    for _ in 0..n_max {
        y = rel.apply(0, &y)?;
        for b in cover.containing(&y) {
            seen[b] = true;
        }
    }
    Ok(seen)
}

pub fn exp_irrational_rotation_pair() -> Result<Report> {
    let mut report = Report::new("irrational-rotations", DEFAULT_SEED);
    let bounds = Bounds::default();
    for (name, rel) in [("golden", golden_rotation()), ("silver", silver_rotation())] {
        let verdict = check_transitivity(&rel, &bounds)?;
        let confirmed = verdict.is_confirmed();
        report.verdict(
            &format!("transitivity of the {name} rotation"),
            Expected::Status(Status::ConfirmedWithinBounds),
            verdict,
        );
        let cover = checker_cover(&rel, &bounds)?;
        let mut agree = 0;
        for u in 0..cover.len() {
            let direct = orbit_visits(&rel, &cover, &cover.ball(u).center, bounds.n_max)?;
            if direct.iter().all(|&s| s) == confirmed {
                agree += 1;
            }
        }
        report.fact(
            &format!("direct orbits agree with the checker on every ball ({name})"),
            agree == cover.len(),
            format!("{agree} of {} balls", cover.len()),
        );
        let graph = ReachGraph::build(&rel, &cover, bounds.net_eps())?;
        let connected = graph.is_strongly_connected();
        report.fact(
            &format!("reach graph strongly connected ({name})"),
            connected == confirmed,
            connected.to_string(),
        );
    }

    let mut pair = irrational_pair();
    pair.verify_commutativity(bounds.net_eps(), 1e-9)?;
    let sup = check_super_transitivity(&pair, &bounds)?;
    report.verdict("super-transitivity of the pair", Expected::NotConfirmed, sup);

    let mut spreads = Vec::new();
    for j in 0..8 {
        let x = Point::Circle(TAU * j as f64 / 8.0 + 0.1);
        spreads.push(pair.n_fold_image(50, &x)?.diameter());
    }
    let least = spreads.iter().copied().fold(f64::INFINITY, f64::min);
    report.detail("spread_at_50", json!(spreads));
    report.fact(
        "diameter of F^50(x) exceeds 2 cover_eps",
        least > 2.0 * bounds.cover_eps,
        format!("smallest diameter {least}"),
    );
    Ok(report)
}

/// One `(ε, k)` case of the shift-family construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftCase {
    pub eps: f64,
    pub k: usize,
    pub r: u32,
    pub seed_set: HSet,
    pub dist_ab: f64,
    pub dist_ac: f64,
    pub separation: f64,
}

/// `min{r : 2^{-r} < ε}`.
pub fn shift_radius(eps: f64) -> u32 {
    let mut r = 0;
    while 2f64.powi(-(r as i32)) >= eps {
        r += 1;
    }
    r
}

/// Random eventually-constant sequence with a short core near the origin.
pub fn random_biseq(rng: &mut impl Rng) -> BiSeq {
    let len = rng.gen_range(0..8);
    let core = (0..len).map(|_| rng.gen_range(0..=1u8)).collect();
    BiSeq::new(
        rng.gen_range(0..=1),
        core,
        rng.gen_range(0..=1),
        rng.gen_range(-4..=4),
    )
    .expect("binary symbols")
}

/// `B` and `C`: every member with its tail after index `r + 1` set to 0,
/// respectively 1.
pub fn tail_rewrites(a: &HSet, r: u32) -> (HSet, HSet) {
    let space = Space::sigma2();
    let rewrite = |s: u8| {
        let pts = a
            .points()
            .iter()
            .map(|p| {
                let x = p.as_biseq().expect("points of sigma2");
                Point::Sigma2(x.with_tail_after(r as i64 + 1, s))
            })
            .collect();
        HSet::new(&space, pts).expect("nonempty")
    };
    (rewrite(0), rewrite(1))
}

pub fn shift_case(a: &HSet, eps: f64) -> Result<ShiftCase> {
    let rel = shift_pair();
    let space = rel.space();
    let r = shift_radius(eps);
    let (b, c) = tail_rewrites(a, r);
    let (mut fb, mut fc) = (b.clone(), c.clone());
    for _ in 0..r + 2 {
        fb = induced_map(&rel, &fb)?;
        fc = induced_map(&rel, &fc)?;
    }
    Ok(ShiftCase {
        eps,
        k: a.len(),
        r,
        seed_set: a.clone(),
        dist_ab: hausdorff_distance(space, a, &b)?,
        dist_ac: hausdorff_distance(space, a, &c)?,
        separation: hausdorff_distance(space, &fb, &fc)?,
    })
}

pub const SHIFT_EPSILONS: [f64; 3] = [0.5, 0.1, 0.02];

/// The nine `(ε, k)` cases, seeds drawn from `seed`.
pub fn shift_cases(seed: u64) -> Result<Vec<ShiftCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = Space::sigma2();
    let mut out = Vec::new();
    for eps in SHIFT_EPSILONS {
        for k in 1..=3 {
            // distinct members, so that the seed has exactly k points
            let mut pts: Vec<Point> = Vec::new();
            while pts.len() < k {
                let p = Point::Sigma2(random_biseq(&mut rng));
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            out.push(shift_case(&HSet::new(&space, pts)?, eps)?);
        }
    }
    Ok(out)
}

pub fn exp_shift_family_sensitivity(seed: u64) -> Result<Report> {
    let mut report = Report::new("shift-sensitivity", seed);
    let rel = shift_pair();
    let cases = shift_cases(seed)?;
    for c in &cases {
        let ok = c.dist_ab < c.eps && c.dist_ac < c.eps && c.separation >= 1.0;
        report.fact(
            &format!("eps = {}, k = {}", c.eps, c.k),
            ok,
            format!(
                "d(A,B) = {}, d(A,C) = {}, separation at n = {} is {}",
                c.dist_ab,
                c.dist_ac,
                c.r + 2,
                c.separation
            ),
        );
    }
    for eps in SHIFT_EPSILONS {
        let seeds: Vec<HSet> = cases
            .iter()
            .filter(|c| c.eps == eps)
            .map(|c| c.seed_set.clone())
            .collect();
        let bounds = Bounds::default().with_n_max(50).with_net_eps(eps);
        let v = check_sensitivity_induced(&rel, 1.0, &bounds, &seeds)?;
        report.verdict(
            &format!("sensitivity with delta = 1 at net_eps = {eps}"),
            Expected::Status(Status::ConfirmedWithinBounds),
            v,
        );
    }
    report.detail("cases", serde_json::to_value(&cases).expect("serializable"));
    Ok(report)
}

/// Checker names the CLI accepts, in declaration order.
pub fn checker_names() -> Vec<&'static str> {
    CheckerName::ALL.iter().map(|c| c.as_str()).collect()
}
