use std::path::Path;
use std::process::{Command, Output};

use curvekit_core::fixtures::data_dir;
use curvekit_core::reference;
use curvekit_core::universe::enumerate_naive;

fn curvekit(data: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvekit"))
        .env("CURVEKIT_DATA_DIR", data)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// A private copy of the shipped data, so caches land in a temp dir.
fn data_copy() -> tempfile::TempDir {
    let tmp = tempfile::tempdir().unwrap();
    for entry in walk(&data_dir()) {
        let rel = entry.strip_prefix(data_dir()).unwrap();
        if rel.starts_with("cache") {
            continue;
        }
        let dest = tmp.path().join(rel);
        std::fs::create_dir_all(dest.parent().unwrap()).unwrap();
        std::fs::copy(&entry, dest).unwrap();
    }
    tmp
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn enumerate_count_matches_naive_oracle() {
    let data = data_copy();
    let o = curvekit(data.path(), &["enumerate", "--surface", "S0_5", "--bound", "8"]);
    assert!(o.status.success());
    let naive = enumerate_naive(&reference::named("S0_5").unwrap(), 8).len();
    assert_eq!(stdout(&o), format!("S0_5 L=8: {naive} curves\n"));
    let cache = std::fs::read_to_string(data.path().join("cache/S0_5_L8.jsonl")).unwrap();
    assert_eq!(cache.lines().count(), naive + 1);
}

#[test]
fn usage_errors_exit_two() {
    let data = data_copy();
    for args in [
        &["enumerate", "--surface", "S0_5", "--bound", "0"][..],
        &["enumerate", "--surface", "S7_7", "--bound", "4"],
        &["enumerate", "--bound", "4"],
        &["enumerate", "--surface", "S0_5", "--bound", "4", "--bogus"],
        &["classify", "--surface", "S0_5", "--bound", "9"],
        &["verify", "--fixture", "no_such_fixture"],
        &["--jobs", "0", "verify", "--all"],
    ] {
        let o = curvekit(data.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = curvekit(data.path(), &["classify", "--surface", "S0_5", "--bound", "9"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("run `curvekit enumerate`"));
}

#[test]
fn classify_agrees_on_sphere_with_five_punctures() {
    let data = data_copy();
    assert!(curvekit(data.path(), &["enumerate", "--surface", "S0_5", "--bound", "16"]).status.success());
    let text = curvekit(data.path(), &["classify", "--surface", "S0_5", "--bound", "16"]);
    let json = curvekit(data.path(), &["classify", "--surface", "S0_5", "--bound", "16", "--format", "json"]);
    assert!(text.status.success() && json.status.success());
    let rows: Vec<Vec<String>> = stdout(&text)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(' ').map(String::from).collect())
        .collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[4] == "true" && r[2] != "nonseparating"));

    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let curves = v["curves"].as_array().unwrap();
    assert_eq!(curves.len(), rows.len());
    for (c, r) in curves.iter().zip(&rows) {
        assert_eq!(c["id"].to_string(), r[0]);
        assert_eq!(c["weight"].to_string(), r[1]);
        assert_eq!(c["topological"].as_str().unwrap(), r[2]);
        assert_eq!(c["simplicial"].as_str().unwrap(), r[3]);
    }
}

#[test]
fn negative_swap_exits_one_naming_the_class_check() {
    let data = data_copy();
    let o = curvekit(data.path(), &["verify", "--fixture", "negative_swap", "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL class negative_swap"));
    assert!(out.contains("PASS edges negative_swap"));
}

#[test]
fn verify_all_passes_and_seeded_runs_repeat() {
    let data = data_copy();
    let o = curvekit(data.path(), &["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["outcomes"].as_array().unwrap().iter().all(|x| x["met"] == true));
    for r in v["reports"].as_array().unwrap() {
        for key in ["check", "fixture", "status", "details"] {
            assert!(r.get(key).is_some());
        }
    }

    let a = curvekit(data.path(), &["verify", "--surface", "S1_2", "--seed", "42"]);
    let b = curvekit(data.path(), &["verify", "--surface", "S1_2", "--seed", "42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"seed\": 42"));
}

#[test]
fn data_dir_override_is_honoured() {
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(curvekit(empty.path(), &["verify", "--all"]).status.code(), Some(2));

    // A copy with one exhaustion descriptor edited to break condition 4.
    let data = data_copy();
    let valid = data.path().join("exhaustion/exhaustion_valid.json");
    let broken = std::fs::read_to_string(data.path().join("exhaustion/exhaustion_condition4.json")).unwrap();
    std::fs::write(&valid, broken.replace("exhaustion_condition4", "exhaustion_valid")).unwrap();
    let o = curvekit(data.path(), &["verify", "--fixture", "exhaustion_valid", "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL condition4 exhaustion_valid"));
}

#[test]
fn triangulation_file_and_mapping_class_file() {
    let data = data_copy();
    let tri = data.path().join("surfaces/S0_6.json");
    let dot = curvekit(data.path(), &["export", "--triangulation", tri.to_str().unwrap(), "--bound", "6"]);
    assert!(dot.status.success());
    assert!(stdout(&dot).starts_with("graph S0_6_L6 {"));
    let json = curvekit(
        data.path(),
        &["export", "--triangulation", tri.to_str().unwrap(), "--bound", "6", "--format", "json"],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(v["vertices"].is_array() && v["adjacency"].is_object());

    let set: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(data.path().join("mapping_classes/S0_6.json")).unwrap()).unwrap();
    let mut mc = set["mappingClasses"][3].clone();
    mc.as_object_mut().unwrap().remove("name");
    let path = data.path().join("mc.json");
    std::fs::write(&path, mc.to_string()).unwrap();
    let o = curvekit(
        data.path(),
        &["verify", "--surface", "S0_6", "--bound", "10", "--fixture", path.to_str().unwrap(), "--format", "text"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("1/1 fixtures behaved as expected"));
}
