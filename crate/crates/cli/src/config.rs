//! Run configuration: a JSON document, optionally overridden by flags,
//! validated against `schema/run-config.schema.json` before use.

use std::path::PathBuf;

use serde::Deserialize;
use serde_json::{Map, Value};
use setdyn::checkers::{Bounds, CheckerName, LemmaParams};
use setdyn::experiments::{builtin_family, DEFAULT_SEED};
use setdyn::hyperspace::HSet;
use setdyn::relation::Relation;

use crate::Failure;

pub const SCHEMA: &str = include_str!("../schema/run-config.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Orbit,
    Check,
    Reproduce,
    Net,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub relation: Option<Relation>,
    pub family: Option<String>,
    pub checker: Option<CheckerName>,
    pub experiment: Option<String>,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub seeds: Vec<HSet>,
    pub steps: Option<usize>,
    pub delta: Option<f64>,
    pub lemma: Option<LemmaParams>,
    pub eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Validates `doc` against the schema, then deserializes it.
    pub fn from_value(doc: Value) -> Result<Self, Failure> {
        let schema: Value = serde_json::from_str(SCHEMA).expect("schema is valid JSON");
        let validator = jsonschema::validator_for(&schema).expect("schema compiles");
        let problems: Vec<String> = validator
            .iter_errors(&doc)
            .map(|e| {
                let at = e.instance_path().to_string();
                if at.is_empty() {
                    e.to_string()
                } else {
                    format!("{at}: {e}")
                }
            })
            .collect();
        if !problems.is_empty() {
            return Err(Failure::Invalid(format!(
                "config does not match the schema:\n  {}",
                problems.join("\n  ")
            )));
        }
        serde_json::from_value(doc).map_err(|e| Failure::Invalid(format!("config: {e}")))
    }

    pub fn relation(&self) -> Result<Relation, Failure> {
        if let Some(rel) = &self.relation {
            return Ok(rel.clone());
        }
        match &self.family {
            Some(name) => builtin_family(name)
                .ok_or_else(|| Failure::Invalid(format!("unknown family {name:?}"))),
            None => Err(Failure::Invalid("give a relation or a family".into())),
        }
    }

    /// Seeds rebuilt in the relation's space, so they are deduplicated and
    /// checked against it.
    pub fn seeds(&self, rel: &Relation) -> Result<Vec<HSet>, Failure> {
        self.seeds
            .iter()
            .map(|s| {
                for p in s.points() {
                    rel.space().check(p)?;
                }
                Ok(HSet::new(rel.space(), s.points().to_vec())?)
            })
            .collect()
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn rng_seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

/// Flag values layered over the config file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub fields: Map<String, Value>,
    pub bounds: Map<String, Value>,
}

impl Overrides {
    pub fn set(&mut self, key: &str, value: Option<Value>) {
        if let Some(v) = value {
            self.fields.insert(key.into(), v);
        }
    }

    pub fn bound(&mut self, key: &str, value: Option<Value>) {
        if let Some(v) = value {
            self.bounds.insert(key.into(), v);
        }
    }

    pub fn apply(self, mut doc: Value) -> Result<Value, Failure> {
        let Value::Object(obj) = &mut doc else {
            return Err(Failure::Invalid("config must be a JSON object".into()));
        };
        obj.extend(self.fields);
        if !self.bounds.is_empty() {
            let bounds = obj
                .entry("bounds")
                .or_insert_with(|| Value::Object(Map::new()));
            let Value::Object(b) = bounds else {
                return Err(Failure::Invalid("bounds must be a JSON object".into()));
            };
            b.extend(self.bounds);
        }
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;
    use setdyn::experiments::builtin_families;
    use setdyn::spaces::{BiSeq, Point};

    #[test]
    fn serialized_values_satisfy_the_schema() {
        let points = [
            Point::Circle(1.0),
            Point::Interval(0.5),
            Point::Sigma2(BiSeq::new(0, vec![1, 0], 1, -2).unwrap()),
        ];
        for (name, rel) in builtin_families() {
            let seeds: Vec<Value> = points
                .iter()
                .map(|p| json!({ "points": [p] }))
                .collect();
            let doc = json!({
                "command": "check",
                "checker": "transitivity",
                "relation": rel,
                "bounds": Bounds::default(),
                "seeds": seeds,
            });
            let cfg = RunConfig::from_value(doc).unwrap_or_else(|e| panic!("{name}: {e:?}"));
            assert_eq!(cfg.relation().unwrap(), rel);
        }
    }

    #[test]
    fn overrides_merge_into_bounds() {
        let mut o = Overrides::default();
        o.set("command", Some(json!("net")));
        o.bound("n_max", Some(json!(7)));
        let doc = o.apply(json!({ "bounds": { "tol": 0.5 }, "family": "doubling" })).unwrap();
        let cfg = RunConfig::from_value(doc).unwrap();
        assert_eq!(cfg.command, Command::Net);
        assert_eq!((cfg.bounds.n_max, cfg.bounds.tol), (7, 0.5));
    }

    #[test]
    fn schema_rejects_unknown_fields() {
        let doc = json!({ "command": "net", "family": "doubling", "colour": "red" });
        assert!(matches!(RunConfig::from_value(doc), Err(Failure::Invalid(_))));
    }
}
