use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mctwist"))
}

/// Fixtures emitted once per test binary.
fn fixtures() -> &'static PathBuf {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("mctwist-cli-{}", std::process::id()));
        let out = bin().arg("--emit-fixtures").arg(&dir).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        dir
    })
}

fn run(args: &[&str]) -> Output {
    bin().current_dir(fixtures()).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn sign_system_on_circle() {
    let o = run(&["local-system", "circle3.json", "sign3.json", "--ring", "Z"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"H\":[{\"rank\":0},{\"rank\":0,\"torsion\":[2]}]}\n");
    let t = json_ok(&["local-system", "circle4.json", "trivial4.json", "--ring", "Z"]);
    assert_eq!(t, json!({ "H": [{ "rank": 1 }, { "rank": 1 }] }));
    let q = json_ok(&["local-system", "circle4.json", "sign4.json", "--ring", "Q"]);
    assert_eq!(q, json!({ "H": [{ "rank": 0 }, { "rank": 0 }] }));
}

#[test]
fn kn_presentation() {
    let v = json_ok(&["kn", "--n", "2", "--ring", "Q"]);
    assert_eq!(v["ranks"], json!([2, 2, 2]));
    assert_eq!(v["H"], json!([{ "rank": 1 }, { "rank": 0 }, { "rank": 1 }]));
    let table = stdout(&run(&["kn", "--n", "1", "--table"]));
    assert!(table.starts_with("K_1* over Z: ranks [2, 2]"));
}

#[test]
fn mc_check_fixture() {
    assert_eq!(stdout(&run(&["mc-check", "kx-fixture.json"])), "{\"mc\":true}\n");
}

#[test]
fn mc_check_rejects_non_mc() {
    let mut v: Value =
        serde_json::from_str(&std::fs::read_to_string(fixtures().join("kx-fixture.json")).unwrap()).unwrap();
    v["x"] = json!([["x", 2]]);
    let path = fixtures().join("kx-twice.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let out = json_ok(&["mc-check", "kx-twice.json"]);
    assert_eq!(out["mc"], json!(false));
    assert_eq!(out["residual"], json!("2*x^2"));
}

#[test]
fn gauge_search_on_k0() {
    let z = json_ok(&["gauge-search", "k0-pair.json", "--seed", "3"]);
    assert_eq!(z["outcome"], json!("Distinguished"));
    assert_eq!(z["y"]["H"][1], json!({ "rank": 0, "torsion": [2] }));
    let q = json_ok(&["gauge-search", "k0-pair.json", "--seed", "3", "--ring", "Q"]);
    assert_eq!(q["outcome"], json!("Equivalent"));
    assert_eq!(q["gauge"], json!(true));
}

#[test]
fn seed_is_mandatory() {
    assert_eq!(run(&["gauge-search", "k0-pair.json"]).status.code(), Some(1));
}

#[test]
fn unknown_flags_and_inputs_are_rejected() {
    assert_eq!(run(&["kn", "--n", "2", "--colour"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["kn", "--n", "2", "--ring", "F4"]).status.code(), Some(1));
    assert_eq!(run(&["check-dga", "missing.json"]).status.code(), Some(1));
    std::fs::write(fixtures().join("broken.json"), "{\"ring\": \"Z\"").unwrap();
    let o = run(&["check-dga", "broken.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("error"));
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["gauge-search", "k0-pair.json", "--seed", "11", "--ring", "F5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["kinfty", "--n", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn check_dga_on_fixtures() {
    for f in ["k3.json", "kx-fixture.json", "de-rham8.json"] {
        let v = json_ok(&["check-dga", f, "--checks"]);
        assert_eq!(v["ok"], json!(true), "{f}");
        assert!(v["checks"].is_object());
    }
    let v = json_ok(&["check-dga", "k2.json", "--ring", "F2"]);
    assert_eq!(v["ring"], json!("F2"));
}

#[test]
fn cohomology_of_torus() {
    let v = json_ok(&["cohomology", "torus7.json"]);
    assert_eq!(v["H"], json!([{ "rank": 1 }, { "rank": 2 }, { "rank": 1 }]));
}

#[test]
fn k2_dictionary_roundtrip() {
    let v = json_ok(&["k2-dict", "homotopy-gauge.json", "--checks"]);
    assert_eq!(v["mc"], json!(true));
    assert_eq!(v["roundtrip"], json!(true));
    assert!(v["checks"].as_object().unwrap().values().all(|b| b == &json!(true)));
}

#[test]
fn kinfty_truncation() {
    let v = json_ok(&["kinfty", "--n", "3"]);
    assert_eq!(v["d_squared_zero"], json!(true));
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 8);
    assert_eq!(gens[2]["d"], json!("-1 + y_0x_0"));
}

#[test]
fn resolution_of_cyclic_systems() {
    let two = json_ok(&["resolve", "circle3.json", "zmod2-circle3.json"]);
    assert_eq!(two["d_squared_zero"], json!(true));
    assert_eq!(two["start"], json!(-1));
    assert_eq!(two["H"], json!([{ "rank": 0 }, { "rank": 0, "torsion": [2] }, { "rank": 0, "torsion": [2] }]));
    let three = json_ok(&["resolve", "circle3.json", "zmod3-circle3.json"]);
    assert!(three["H"].as_array().unwrap().iter().all(|g| g == &json!({ "rank": 0 })));
}

#[test]
fn truncation_and_minimal_model() {
    let t = json_ok(&["truncate", "circle3.json", "two-stage-circle3.json", "--i", "0"]);
    assert_eq!(t["H"], json!([{ "rank": 0 }, { "rank": 0, "torsion": [2] }]));
    let empty = json_ok(&["truncate", "circle3.json", "two-stage-circle3.json", "--i", "-1"]);
    assert_eq!(empty["truncated"]["degrees"], json!([]));
    let m = json_ok(&["minimal-model", "circle3.json", "rank-two-circle3.json"]);
    assert_eq!(m["minimal"]["degrees"], json!([0]));
    assert_eq!(m["H"], json!([{ "rank": 1 }, { "rank": 1 }, { "rank": 0 }]));
    assert_eq!(run(&["minimal-model", "circle3.json", "rank-two-circle3.json", "--ring", "Z"]).status.code(), Some(1));
}

#[test]
fn holonomy_of_constant_rotation() {
    let line = "0,1,-1,0\n";
    std::fs::write(fixtures().join("rotation.csv"), line.repeat(2001)).unwrap();
    let v = json_ok(&["holonomy", "rotation.csv"]);
    let r = &v["result"];
    let (c, s) = (1f64.cos(), 1f64.sin());
    let want = [[c, s], [-s, c]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((r[i][j].as_f64().unwrap() - want[i][j]).abs() < 1e-10);
        }
    }
    assert!(v["residuals"]["transport"].as_f64().unwrap() < 1e-6);
    assert!(v["order_estimate"].is_number() || v["order_estimate"].is_null());
    std::fs::write(fixtures().join("ragged.csv"), "1,2,3\n").unwrap();
    assert_eq!(run(&["holonomy", "ragged.csv"]).status.code(), Some(1));
}
