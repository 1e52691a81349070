//! `setdyn`: iterate set-valued families, run bounded checkers and
//! reproduce the reference experiments.
//!
//! Exit codes: 0 confirmed or success, 1 refuted or expectation mismatch,
//! 2 invalid input, 3 resource cap exceeded, 4 inconclusive.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use setdyn::checkers::CheckerName;

use config::{Overrides, RunConfig};

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

/// Ways a run can fail before producing a verdict.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Resource(String),
    Io(anyhow::Error),
}

impl From<setdyn::Error> for Failure {
    fn from(e: setdyn::Error) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

#[derive(Parser)]
#[command(name = "setdyn", version, about = "Bounded checks for set-valued dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in family to use when the config has no relation.
    #[arg(long, global = true)]
    family: Option<String>,
    /// Output directory (default: out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    n_max: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    cover_eps: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    net_eps: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Cylinder window for covers of the shift space.
    #[arg(long, global = true)]
    window: Option<u32>,
    /// Separation threshold for sensitivity.
    #[arg(long, global = true, allow_negative_numbers = true)]
    delta: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the induced orbit of the first seed set as CSV and JSON.
    Orbit {
        /// Number of steps N; the trace has N + 1 rows.
        #[arg(long)]
        steps: Option<i64>,
    },
    /// Run one checker and write its verdict.
    Check { checker: Option<String> },
    /// Run a reference experiment, or all of them.
    Reproduce { experiment: Option<String> },
    /// Write an epsilon-net of the space.
    Net {
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<f64>,
    },
}

fn load(cli: &Cli) -> Result<RunConfig, Failure> {
    let c = &cli.common;
    let doc: Value = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Invalid(format!("reading {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Invalid(format!("{}: malformed JSON: {e}", path.display())))?
        }
        None => json!({}),
    };
    let mut o = Overrides::default();
    let (command, extra) = match &cli.command {
        Cmd::Orbit { steps } => ("orbit", steps.map(|s| ("steps", json!(s)))),
        Cmd::Check { checker } => (
            "check",
            // kebab-case names are accepted and normalized
            checker.as_ref().map(|n| {
                let v = CheckerName::parse(n).map_or(json!(n), |c| json!(c.as_str()));
                ("checker", v)
            }),
        ),
        Cmd::Reproduce { experiment } => ("reproduce", experiment.as_ref().map(|e| ("experiment", json!(e)))),
        Cmd::Net { eps } => ("net", eps.map(|e| ("eps", json!(e)))),
    };
    o.set("command", Some(json!(command)));
    if let Some((k, v)) = extra {
        o.set(k, Some(v));
    }
    o.set("family", c.family.as_ref().map(|f| json!(f)));
    o.set("out", c.out.as_ref().map(|p| json!(p)));
    o.set("seed", c.seed.map(|s| json!(s)));
    o.set("delta", c.delta.map(|d| json!(d)));
    o.bound("n_max", c.n_max.map(|n| json!(n)));
    o.bound("cover_eps", c.cover_eps.map(|x| json!(x)));
    o.bound("net_eps", c.net_eps.map(|x| json!(x)));
    o.bound("tol", c.tol.map(|x| json!(x)));
    o.bound("window", c.window.map(|w| json!(w)));
    RunConfig::from_value(o.apply(doc)?)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = load(cli)?;
    match cfg.command {
        config::Command::Orbit => commands::orbit(&cfg),
        config::Command::Check => commands::check(&cfg),
        config::Command::Reproduce => commands::reproduce(&cfg),
        config::Command::Net => commands::net(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RESOURCE
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            EXIT_INVALID
        }
    };
    ExitCode::from(code)
}
