use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use setdyn::checkers::{replay, Status, Verdict};
use setdyn::experiments::{golden_rotation, Report};
use tempfile::TempDir;

fn setdyn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setdyn"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_config(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_vec(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_slice(&fs::read(p).unwrap()).unwrap()
}

fn no_temp_files(dir: &Path) {
    for e in fs::read_dir(dir).unwrap() {
        let e = e.unwrap();
        let name = e.file_name().to_string_lossy().into_owned();
        assert!(!name.contains(".tmp"), "leftover {name}");
        if e.file_type().unwrap().is_dir() {
            no_temp_files(&e.path());
        }
    }
}

const RATIONAL_ORBIT_CARDINALITIES: [usize; 11] = [1, 2, 3, 4, 4, 4, 4, 4, 4, 4, 4];

fn orbit_config(steps: usize) -> Value {
    json!({
        "command": "orbit",
        "family": "rational-pair",
        "steps": steps,
        "seeds": [{ "points": [{ "kind": "circle", "theta": 0.0 }] }]
    })
}

#[test]
fn orbit_of_zero_under_the_rational_pair() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "orbit.json", &orbit_config(10));
    let o = setdyn(tmp.path(), &["orbit", "--config", &cfg, "--out", "o"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let mut rdr = csv::Reader::from_path(tmp.path().join("o/orbit.csv")).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["step", "cardinality", "dh_to_seed", "points"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    let cards: Vec<usize> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(cards, RATIONAL_ORBIT_CARDINALITIES);
    for (j, r) in rows.iter().enumerate() {
        assert_eq!(r[0].parse::<usize>().unwrap(), j);
        let pts: Vec<Value> = serde_json::from_str(&r[3]).unwrap();
        assert_eq!(pts.len(), cards[j]);
    }
    assert_eq!(&rows[0][2], "0.0");

    let summary = read_json(&tmp.path().join("o/orbit.json"));
    assert_eq!(summary["cardinalities"], json!(RATIONAL_ORBIT_CARDINALITIES));
    no_temp_files(tmp.path());
}

#[test]
fn orbit_with_zero_steps_has_one_row() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "orbit.json", &orbit_config(0));
    let o = setdyn(tmp.path(), &["orbit", "--config", &cfg]);
    assert_eq!(code(&o), 0);
    let rdr = csv::Reader::from_path(tmp.path().join("out/orbit.csv")).unwrap();
    assert_eq!(rdr.into_records().count(), 1);
}

#[test]
fn flags_override_the_config_file() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "orbit.json", &orbit_config(10));
    let o = setdyn(tmp.path(), &["orbit", "--config", &cfg, "--steps", "3"]);
    assert_eq!(code(&o), 0);
    let rdr = csv::Reader::from_path(tmp.path().join("out/orbit.csv")).unwrap();
    assert_eq!(rdr.into_records().count(), 4);
}

#[test]
fn verdict_json_round_trips_and_replays() {
    let tmp = TempDir::new().unwrap();
    let o = setdyn(tmp.path(), &["check", "transitivity", "--family", "golden-rotation"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(tmp.path().join("out/verdict.json")).unwrap();
    let v: Verdict = serde_json::from_str(&text).unwrap();
    assert_eq!(v.status, Status::ConfirmedWithinBounds);
    assert!(replay(&golden_rotation(), &v).unwrap());
    assert_eq!(serde_json::to_value(&v).unwrap(), serde_json::from_str::<Value>(&text).unwrap());
}

#[test]
fn super_transitivity_of_a_commuting_pair_never_exits_zero() {
    let tmp = TempDir::new().unwrap();
    for family in ["irrational-pair", "rational-pair"] {
        let o = setdyn(tmp.path(), &["check", "super_transitivity", "--family", family]);
        assert!(matches!(code(&o), 1 | 4), "{family}: {}", code(&o));
    }
}

#[test]
fn custom_relation_from_config() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({
        "command": "check",
        "checker": "dense_periodicity_induced",
        "relation": {
            "space": { "kind": "circle" },
            "maps": [
                { "type": "table_map", "table": [1, 2, 3, 4, 5, 6, 7, 0] },
                { "type": "table_map", "table": [3, 4, 5, 6, 7, 0, 1, 2] }
            ]
        },
        "bounds": { "net_eps": 0.3 },
        "seeds": [{ "points": [{ "kind": "circle", "theta": 0.0 }] }]
    });
    let p = write_config(tmp.path(), "z8.json", &cfg);
    let o = setdyn(tmp.path(), &["check", "--config", &p]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&tmp.path().join("out/verdict.json"));
    assert_eq!(v["status"], "RefutedWithinBounds");
}

#[test]
fn inconclusive_exits_four() {
    let tmp = TempDir::new().unwrap();
    let o = setdyn(
        tmp.path(),
        &["check", "topological-mixing", "--family", "golden-rotation", "--cover-eps", "0.5", "--n-max", "50"],
    );
    assert_eq!(code(&o), 4);
}

#[test]
fn invalid_input_exits_two() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("bad.json"), "{\"command\": ").unwrap();
    let cases: [&[&str]; 7] = [
        &["check", "transitivity", "--family", "golden-rotation", "--n-max", "0"],
        &["check", "--config", "bad.json"],
        &["check", "no-such-checker", "--family", "golden-rotation"],
        &["check", "transitivity", "--family", "no-such-family"],
        &["check", "transitivity"],
        &["reproduce", "spirals"],
        &["check", "sensitivity_induced", "--family", "doubling"],
    ];
    for args in cases {
        let o = setdyn(tmp.path(), args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn schema_diagnostics_name_the_field() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({
        "command": "orbit",
        "family": "rational-pair",
        "steps": 3,
        "seeds": [{ "points": [{ "kind": "interval", "t": 2.0 }] }]
    });
    let p = write_config(tmp.path(), "c.json", &cfg);
    let o = setdyn(tmp.path(), &["orbit", "--config", &p]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("/seeds/0/points/0"), "{err}");
}

#[test]
fn seeds_outside_the_space_are_invalid() {
    let tmp = TempDir::new().unwrap();
    let mut cfg = orbit_config(3);
    cfg["seeds"] = json!([{ "points": [{ "kind": "interval", "t": 0.5 }] }]);
    let p = write_config(tmp.path(), "c.json", &cfg);
    let o = setdyn(tmp.path(), &["orbit", "--config", &p]);
    assert_eq!(code(&o), 2);
}

#[test]
fn resource_caps_exit_three() {
    let tmp = TempDir::new().unwrap();
    let o = setdyn(tmp.path(), &["net", "--family", "shift-pair", "--eps", "0.0001"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn net_is_written() {
    let tmp = TempDir::new().unwrap();
    let o = setdyn(tmp.path(), &["net", "--family", "golden-rotation", "--eps", "0.5"]);
    assert_eq!(code(&o), 0);
    let v = read_json(&tmp.path().join("out/net.json"));
    assert_eq!(v["size"], 13);
    assert_eq!(v["points"].as_array().unwrap().len(), 13);
}

#[test]
fn reproduce_all_writes_three_reports() {
    let tmp = TempDir::new().unwrap();
    let o = setdyn(tmp.path(), &["reproduce", "all", "--out", "r", "--seed", "11"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["rational-rotations", "irrational-rotations", "shift-sensitivity"] {
        let dir = tmp.path().join("r").join(name);
        let r: Report = serde_json::from_slice(&fs::read(dir.join("report.json")).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.seed, 11);
        let rdr = csv::Reader::from_path(dir.join("verdicts.csv")).unwrap();
        assert_eq!(rdr.into_records().count(), r.verdicts.len());
    }
    no_temp_files(tmp.path());
}
