use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_freecurve"))
}

fn catalog() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("freecurve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn fermat_cubic_is_smooth() {
    let out = run(&["analyze", "--curve", "x^3+y^3+z^3", "--tasks", "mdr,tjurina,classify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "freecurve/1");
    let t = &v["jobs"][0]["tasks"];
    assert_eq!(t["mdr"]["value"], 2);
    assert_eq!(t["mdr"]["op"], "graded::mdr");
    assert_eq!(t["tjurina"]["value"], 0);
    assert_eq!(t["classify"]["summary"], "Other(smooth)");
    assert_eq!(t["classify"]["verdict"]["kind"], "other");
}

#[test]
fn maximizing_nonic_from_the_catalog() {
    let cat = catalog();
    let out = run(&["analyze", "--entry", "sextic-3", "--tasks", "mdr,tjurina,classify", "--catalog", cat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)["jobs"][0]["tasks"]["classify"];
    assert_eq!(c["mdr"], 3);
    assert_eq!(c["tau"], 49);
    assert_eq!(c["maximizing"], true);
    assert_eq!(c["verdict"]["exponents"], serde_json::json!([3, 5]));
}

#[test]
fn every_numeric_task_names_its_op() {
    let out = run(&[
        "analyze",
        "--curve",
        "x*y*(x*y*z+x^3+y^3)",
        "--points",
        "(0:0:1)",
        "--tasks",
        "mdr,tjurina,classify,local,modular,supersolvable,saito",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let tasks = v["jobs"][0]["tasks"].as_object().unwrap();
    assert_eq!(tasks.len(), 7);
    for (name, t) in tasks {
        let op = if t.is_array() { &t[0]["op"] } else { &t["op"] };
        assert!(op.is_string(), "{name}: {t}");
    }
    assert_eq!(tasks["modular"][0]["is_modular"], true);
    assert_eq!(tasks["modular"][0]["sampled_lines"]["all_agree"], true);
    assert_eq!(tasks["supersolvable"]["supersolvable"], true);
    assert_eq!(tasks["saito"]["certified"], true);
    assert_eq!(tasks["saito"]["exponents"], serde_json::json!([2, 2]));
}

#[test]
fn flex_census_needs_every_singular_point() {
    let out = run(&["analyze", "--curve", "x*y*z+x^3+y^3", "--points", "(0:0:1)", "--tasks", "flexes"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["jobs"][0]["tasks"]["flexes"]["total_i"], 3);
    let out = run(&["analyze", "--curve", "x*y*z+x^3+y^3", "--tasks", "flexes"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["jobs"][0]["tasks"]["flexes"]["error"]["kind"], "IncompleteSingularPoints");
}

#[test]
fn input_errors_exit_2() {
    let cases: [&[&str]; 5] = [
        &["analyze", "--curve", "x^3+y^3+z^3", "--tasks", ""],
        &["analyze", "--curve", "x^3+y^3+z^3"],
        &["analyze", "--curve", "x^3+y^3+z^3", "--tasks", "volume"],
        &["analyze", "--curve", "x^3+y", "--tasks", "mdr"],
        &["analyze", "--curve", "x^3+*y", "--tasks", "mdr"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(json(&out)["error"]["exit_code"], 2);
    }
    let out = run(&["construct", "conicline"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["construct", "thom-sebastiani", "--ell", "x,y", "--k", "1,1", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "DegreeMismatch");
}

#[test]
fn math_errors_exit_3() {
    let out = run(&["analyze", "--curve", "x^2*(y+z)", "--tasks", "mdr"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "NotReduced");
}

#[test]
fn missing_catalog_exits_4() {
    let out = run(&["repro", "--catalog", "/nonexistent/catalog.json"]);
    assert_eq!(out.status.code(), Some(4));
    let out = run(&["analyze", "--entry", "sextic-3", "--tasks", "mdr", "--catalog", "/nonexistent/catalog.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn repro_fermat_arrangement_up_to_degree_11() {
    let cat = catalog();
    let out = run(&["repro", "--catalog", cat.to_str().unwrap(), "--family", "fermat-arrangement", "--max-degree", "11", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["entries"].as_array().unwrap();
    let pass: Vec<&str> = rows.iter().filter(|r| r["status"] == "PASS").map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(
        pass,
        [
            "fermat-arrangement-d2-prime",
            "fermat-arrangement-d2-double-prime",
            "fermat-arrangement-d2-tangents-and-triangle",
            "fermat-arrangement-d3-double-prime"
        ]
    );
    assert!(rows.iter().all(|r| r["status"] != "FAIL"));
    let skipped: Vec<&Value> = rows.iter().filter(|r| r["status"] == "SKIPPED").collect();
    assert_eq!(skipped.len(), 1);
    assert_eq!(skipped[0]["degree"], 15);
}

#[test]
fn repro_large_entries_are_skipped_by_default() {
    let cat = catalog();
    let out = run(&["repro", "--catalog", cat.to_str().unwrap(), "--filter", "degree>13"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("SKIPPED"), "{table}");
    assert!(!table.contains("PASS "), "{table}");
}

#[test]
fn repro_conicline_towers() {
    let cat = catalog();
    let out = run(&["repro", "--catalog", cat.to_str().unwrap(), "--family", "conicline", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for r in v["entries"].as_array().unwrap() {
        assert_eq!(r["status"], "PASS", "{r}");
    }
    let m2j3 = v["entries"].as_array().unwrap().iter().find(|r| r["id"] == "conicline-m2-j3").unwrap();
    let mdr = m2j3["checks"].as_array().unwrap().iter().find(|c| c["name"] == "mdr").unwrap();
    assert_eq!(mdr["computed"], "3");
}

#[test]
fn repro_exits_nonzero_on_failure() {
    let bad = r#"{"schema":"freecurve-catalog/1","entries":[
        {"id":"wrong","claim":"The Fermat cubic has mdr 1.","recipe":{"family":"explicit","polynomial":"x^3+y^3+z^3"},
         "field":{"kind":"Q"},"expected":{"degree":3,"mdr":1}}]}"#;
    let path = tmp("bad-catalog.json");
    std::fs::write(&path, bad).unwrap();
    let out = run(&["repro", "--catalog", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}

#[test]
fn construct_writes_every_part() {
    let path = tmp("ts.json");
    let out = run(&["construct", "thom-sebastiani", "--ell", "x,y", "--k", "1,1", "--d", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let labels: Vec<&str> = v["jobs"].as_array().unwrap().iter().map(|j| j["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["C", "C'", "C''"]);
    assert_eq!(v["jobs"][1]["curve"], "x^2*y^2-x*y*z^2");
    assert_eq!(v["jobs"][1]["expected"]["verdict"]["exponents"], serde_json::json!([1, 2]));
}

fn round_trip(args: &[&str]) {
    let cat = catalog();
    let path = tmp(&format!("{}.json", args.join("_").replace(['-', ','], "")));
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--catalog", cat.to_str().unwrap(), "--output", path.to_str().unwrap()]);
    assert_eq!(run(&full).status.code(), Some(0), "{args:?}");
    let out = run(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    for job in v["jobs"].as_array().unwrap() {
        let checks = job["checks"].as_array().unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c["pass"] == true), "{job}");
    }
}

#[test]
fn construct_then_analyze_round_trips() {
    round_trip(&["thom-sebastiani", "--ell", "x,y,x+y", "--k", "1,1,1", "--d", "3"]);
    round_trip(&["fermat-extended", "--d", "3"]);
    round_trip(&["conicline", "--m", "2", "--j", "3"]);
    round_trip(&["cross", "--m", "2"]);
    round_trip(&["named", "--name", "sextic-3"]);
}

#[test]
fn output_is_deterministic() {
    let cat = catalog();
    let args = [
        "analyze",
        "--entry",
        "nodal-cubic-lines",
        "--tasks",
        "mdr,tjurina,classify,local,modular,saito",
        "--modular-check",
        "2147483497,2147483353",
        "--catalog",
        cat.to_str().unwrap(),
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = ["repro", "--catalog", cat.to_str().unwrap(), "--family", "cross", "--json"];
    assert_eq!(run(&r).stdout, run(&r).stdout);
}
