use serde::Serialize;
use serde_json::json;
use setdyn::checkers::*;
use setdyn::experiments::{run_experiment, Report};
use setdyn::hyperspace::{hausdorff_distance, induced_orbit, HSet};
use setdyn::relation::Relation;
use setdyn::spaces::Net;

use crate::config::RunConfig;
use crate::output::{write_csv, write_json};
use crate::Failure;

pub const EXIT_OK: u8 = 0;
pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Serialize)]
struct OrbitRow {
    step: usize,
    cardinality: usize,
    dh_to_seed: f64,
    points: String,
}

/// Default orbit seed: the first point of the coarsest net.
fn default_seed(rel: &Relation) -> Result<HSet, Failure> {
    let net = match rel.table_net() {
        Some(net) => net,
        None => Net::for_eps(rel.space(), rel.space().diameter())?,
    };
    Ok(HSet::singleton(net.point(0)))
}

pub fn orbit(cfg: &RunConfig) -> Result<u8, Failure> {
    let rel = cfg.relation()?;
    let seed = match cfg.seeds(&rel)?.into_iter().next() {
        Some(s) => s,
        None => default_seed(&rel)?,
    };
    let steps = cfg.steps.unwrap_or(0);
    let orbit = induced_orbit(&rel, &seed, steps)?;
    let mut rows = Vec::with_capacity(orbit.len());
    for (step, set) in orbit.iter().enumerate() {
        rows.push(OrbitRow {
            step,
            cardinality: set.len(),
            dh_to_seed: hausdorff_distance(rel.space(), &seed, set)?,
            points: serde_json::to_string(set.points()).expect("points serialize"),
        });
    }
    let dir = cfg.out_dir();
    write_csv(&dir.join("orbit.csv"), &rows)?;
    let summary = json!({
        "relation": rel,
        "seed_set": seed,
        "steps": steps,
        "cardinalities": rows.iter().map(|r| r.cardinality).collect::<Vec<_>>(),
        "dh_to_seed": rows.iter().map(|r| r.dh_to_seed).collect::<Vec<_>>(),
        "final": orbit.last(),
    });
    write_json(&dir.join("orbit.json"), &summary)?;
    println!("{} steps, final cardinality {}", steps, rows[steps].cardinality);
    Ok(EXIT_OK)
}

pub fn check(cfg: &RunConfig) -> Result<u8, Failure> {
    let rel = cfg.relation()?;
    let name = cfg.checker.ok_or_else(|| Failure::Invalid("no checker given".into()))?;
    let b = &cfg.bounds;
    let seeds = cfg.seeds(&rel)?;
    let verdict = match name {
        CheckerName::Transitivity => check_transitivity(&rel, b),
        CheckerName::SuperTransitivity => check_super_transitivity(&rel, b),
        CheckerName::WeakMixing => check_weak_mixing(&rel, b),
        CheckerName::SuperWeakMixing => check_super_weak_mixing(&rel, b),
        CheckerName::TopologicalMixing => check_topological_mixing(&rel, b),
        CheckerName::SuperTopologicalMixing => check_super_topological_mixing(&rel, b),
        CheckerName::DensePeriodicityRelation => check_dense_periodicity_relation(&rel, b),
        CheckerName::DensePeriodicityInduced => check_dense_periodicity_induced(&rel, b, &seeds),
        CheckerName::SensitivityInduced => {
            let delta = cfg.delta.ok_or_else(|| Failure::Invalid("sensitivity needs delta".into()))?;
            check_sensitivity_induced(&rel, delta, b, &seeds)
        }
        CheckerName::Lemma1Convergence => {
            let params = cfg
                .lemma
                .as_ref()
                .ok_or_else(|| Failure::Invalid("lemma1_convergence needs lemma parameters".into()))?;
            check_lemma1_convergence(&rel, params, b)
        }
    }?;
    write_json(&cfg.out_dir().join("verdict.json"), &verdict)?;
    println!("{} {} ({} ms)", verdict.checker, verdict.status, verdict.elapsed_ms);
    Ok(match verdict.status {
        Status::ConfirmedWithinBounds => EXIT_OK,
        Status::RefutedWithinBounds => EXIT_REFUTED,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

#[derive(Serialize)]
struct VerdictRow<'a> {
    label: &'a str,
    checker: &'a str,
    status: String,
    elapsed_ms: u64,
    n_max: usize,
    cover_eps: f64,
    net_eps: f64,
}

#[derive(Serialize)]
struct EmptyRow {}

fn write_report(cfg: &RunConfig, r: &Report) -> Result<(), Failure> {
    let dir = cfg.out_dir().join(&r.name);
    write_json(&dir.join("report.json"), r)?;
    let rows: Vec<VerdictRow> = r
        .verdicts
        .iter()
        .map(|v| VerdictRow {
            label: &v.label,
            checker: v.verdict.checker.as_str(),
            status: v.verdict.status.to_string(),
            elapsed_ms: v.verdict.elapsed_ms,
            n_max: v.verdict.bounds.n_max,
            cover_eps: v.verdict.bounds.cover_eps,
            net_eps: v.verdict.bounds.net_eps(),
        })
        .collect();
    if rows.is_empty() {
        write_csv(&dir.join("verdicts.csv"), &[] as &[EmptyRow])?;
    } else {
        write_csv(&dir.join("verdicts.csv"), &rows)?;
    }
    Ok(())
}

pub fn reproduce(cfg: &RunConfig) -> Result<u8, Failure> {
    let name = cfg
        .experiment
        .as_deref()
        .ok_or_else(|| Failure::Invalid("no experiment given".into()))?;
    let reports = run_experiment(name, cfg.rng_seed())?;
    let mut mismatched = false;
    for r in &reports {
        write_report(cfg, r)?;
        if r.passed() {
            println!("{}: ok ({} expectations)", r.name, r.expectations.len());
        } else {
            mismatched = true;
            eprintln!("{}: mismatch", r.name);
            for e in r.mismatches() {
                eprintln!("  {}", e.label);
                eprintln!("  - expected: {}", serde_json::to_string(&e.expected).expect("serializes"));
                eprintln!("  + actual:   {}", e.actual);
            }
        }
    }
    Ok(if mismatched { EXIT_REFUTED } else { EXIT_OK })
}

pub fn net(cfg: &RunConfig) -> Result<u8, Failure> {
    let rel = cfg.relation()?;
    let space = rel.space();
    let (eps, points) = match rel.table_net() {
        Some(net) => (None, (0..net.size() as usize).map(|j| net.point(j)).collect()),
        None => {
            let eps = cfg.eps.unwrap_or_else(|| cfg.bounds.net_eps());
            (Some(eps), setdyn::spaces::epsilon_net(space, eps)?)
        }
    };
    write_json(
        &cfg.out_dir().join("net.json"),
        &json!({ "space": space, "eps": eps, "size": points.len(), "points": points }),
    )?;
    println!("{} points", points.len());
    Ok(EXIT_OK)
}
