use std::path::Path;
use std::process::{Command, Output};

fn egb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egb")).args(args).output().expect("spawn egb")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

const ZERO_BOUNDARY: &str = r#"{
  "generators": [{"action": "0"}, {"action": "1/2"}, {"action": "3", "degree": 1}],
  "boundary": [["0","0","0"],["0","0","0"],["0","0","0"]]
}"#;

#[test]
fn fixture_csv_has_sixteen_rows() {
    let o = egb(&["eggbeater", "--p", "2", "--lambda", "48", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = text.lines();
    assert!(rows.next().unwrap().starts_with("signs,x0,y0,action_exact"));
    let rows: Vec<_> = rows.collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r.contains(",true,")));
}

#[test]
fn auto_lambda_writes_tables_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = egb(&["eggbeater", "--lambda", "auto", "--count", "3", "--out", out.to_str().unwrap()]);
    let v = json(&o);
    assert_eq!(v["threshold"], "48");
    let lambdas: Vec<_> = v["runs"].as_array().unwrap().iter().map(|r| r["lambda"].as_str().unwrap().to_string()).collect();
    assert_eq!(lambdas, ["48", "96", "144"]);
    assert!(out.join("summary.json").exists());
    assert!(out.join("eggbeater_lambda_144.csv").exists());
}

#[test]
fn exit_code_tracks_validation() {
    for lambda in ["24", "48", "72"] {
        let o = egb(&["eggbeater", "--p", "1", "--mu", "1/2", "--nu", "1/3", "--lambda", lambda]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let run = &v["runs"][0];
        let complete = run["valid"] == run["total"];
        assert_eq!(o.status.code(), Some(if complete { 0 } else { 2 }), "lambda {lambda}");
    }
}

#[test]
fn malformed_input_exits_one() {
    assert_eq!(egb(&["eggbeater", "--mu", "1/2"]).status.code(), Some(1));
    assert_eq!(egb(&["eggbeater", "--p", "1", "--mu", "1/2", "--nu", "1/3", "--lambda", "5"]).status.code(), Some(1));
    assert_eq!(egb(&["eggbeater-2d", "--mu", "1/3", "--nu", "1/3", "--lambda", "48"]).status.code(), Some(1));
}

#[test]
fn planar_variant_has_four_points() {
    let v = json(&egb(&["eggbeater-2d", "--mu", "1/2", "--nu", "1/4", "--lambda", "160"]));
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
}

#[test]
fn bottleneck_of_identical_files_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", ZERO_BOUNDARY);
    let o = egb(&["barcode", "decompose", &c]);
    assert!(o.status.success());
    let a = write(dir.path(), "a.json", &stdout(&o));
    let v = json(&egb(&["barcode", "bottleneck", &a, &a]));
    assert_eq!(v["bottleneck"], "0");
}

#[test]
fn zero_boundary_gives_infinite_bars() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", ZERO_BOUNDARY);
    let v = json(&egb(&["barcode", "decompose", &c]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["death"] == "inf"));
}

#[test]
fn barcode_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{
      "generators": [{"action": "0"}, {"action": "2", "degree": 1}],
      "boundary": [["0","1"],["0","0"]]
    }"#);
    let first = stdout(&egb(&["barcode", "decompose", &c]));
    let a = write(dir.path(), "a.json", &first);
    let b = write(dir.path(), "b.json", &serde_json::to_string(&serde_json::from_str::<serde_json::Value>(&first).unwrap()).unwrap());
    assert_eq!(json(&egb(&["barcode", "bottleneck", &a, &b]))["bottleneck"], "0");
    assert!(first.contains("\"2\""));
}

#[test]
fn single_tuple_module_has_positive_mu() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", r#"{"p": 3, "tuples": [{"birth": "0", "death": "4"}]}"#);
    let v = json(&egb(&["barcode", "mu", &m]));
    assert_ne!(v["mu_p"], "0");
    assert_eq!(v["barcode"][0]["death"], "4");
    assert!(egb(&["barcode", "mu", &m, "--zeta-index", "2"]).status.success());
}

#[test]
fn bounds_survive_stabilization() {
    let plain = json(&egb(&["bounds", "--lambda", "96"]));
    let stab = json(&egb(&["bounds", "--lambda", "96", "--stabilize", "1,2,1"]));
    for key in ["mu_p_paper_bound", "pow_bound", "aut_bound", "gap"] {
        assert_eq!(plain[0][key], stab[0][key], "{key}");
    }
    assert_eq!(stab[0]["provenance"]["stabilize"], serde_json::json!([1, 2, 1]));
}

#[test]
fn bounds_reject_empty_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.json", r#"{"p": 2, "tuples": []}"#);
    assert_eq!(egb(&["bounds", "--file", &f]).status.code(), Some(1));
}

#[test]
fn bounds_svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.json", r#"{"p": 2, "tuples": [{"action": "0"}, {"action": "8"}]}"#);
    let o = egb(&["bounds", "--file", &f, "--format", "svg"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("<line").count(), 2);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# fixture run\np=1\nmu=1/2\nnu=1/3\nlambda=auto\n");
    let v = json(&egb(&["--config", &cfg, "eggbeater"]));
    assert_eq!(v["p"], 1);
    let v = json(&egb(&["--config", &cfg, "eggbeater", "--nu", "1/5"]));
    assert_eq!(v["nu"][0], "1/5");
}

#[test]
fn free_group_commands() {
    assert_eq!(stdout(&egb(&["freegroup", "si", "2", "3"])).trim(), "8");
    assert_eq!(stdout(&egb(&["freegroup", "conjugate", "a^2 b", "b a^2"])).trim(), "true");
    assert_eq!(stdout(&egb(&["freegroup", "conjugate", "a b", "a^-1 b"])).trim(), "false");
    assert_eq!(stdout(&egb(&["freegroup", "reduce", "a b b^-1 a"])).trim(), "a^2");
    assert_eq!(stdout(&egb(&["freegroup", "itinerary", "--m", "6,4", "--n", "8,3"])).trim(), "a^6 b^8 a^4 b^3");
}

#[test]
fn sequential_and_parallel_agree() {
    let a = stdout(&egb(&["eggbeater", "--lambda", "96"]));
    let b = stdout(&egb(&["--sequential", "eggbeater", "--lambda", "96"]));
    assert_eq!(a, b);
}

#[test]
fn spread_of_zero_boundary_complex_is_labelled() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{
      "generators": [{"action": "1"}, {"action": "1"}],
      "boundary": [["0","0"],["0","0"]],
      "chain_map": [["0","1"],["1","0"]],
      "k": 2
    }"#);
    let v = json(&egb(&["spread", &c]));
    assert_eq!(v["w_spread"], "inf");
    assert_eq!(v["w_spread_note"], "model-degenerate, use spread_lower_bound_from_gaps");
}
