use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn chessgon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chessgon"))
        .args(args)
        .env_remove("CHESSGON_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn generated_graph_feeds_gonality() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k23.json");
    let out = chessgon(&["gen", "--piece", "king", "--rows", "2", "--cols", "3"]);
    assert!(out.status.success());
    fs::write(&path, &out.stdout).unwrap();
    let v = json(&chessgon(&["gonality", "--graph", path.to_str().unwrap()]));
    assert_eq!(v["status"], "exact");
    assert_eq!(v["gonality"], 4);
}

#[test]
fn edge_list_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.txt");
    fs::write(&path, "5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(json(&chessgon(&["gonality", "--graph", p]))["gonality"], 2);
    assert_eq!(json(&chessgon(&["rank", "--graph", p, "--divisor", "[1,0,1,0,0]"]))["rank"], 1);
    assert_eq!(json(&chessgon(&["alpha", "--graph", p]))["alpha"], 2);
}

#[test]
fn gonality_uses_the_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_chessgon"))
            .args(["gonality", "--piece", "knight", "--rows", "3", "--cols", "4"])
            .env("CHESSGON_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = json(&run());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    let entry = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    fs::write(&entry, "garbage").unwrap();
    let second = run();
    assert!(String::from_utf8_lossy(&second.stderr).contains("warning"));
    assert_eq!(json(&second)["gonality"], first["gonality"]);
    assert_eq!(json(&run())["gonality"], 2);
}

#[test]
fn construct_verifies_and_renders() {
    let v = json(&chessgon(&["construct", "--name", "kings", "--rows", "3", "--cols", "7", "--verify"]));
    assert_eq!(v["verified_positive_rank"], true);
    assert_eq!(v["degree"], 7);
    assert_eq!(v["degree_matches"], true);
    assert_eq!(v["board"].as_str().unwrap().lines().count(), 3);
}

#[test]
fn catalogue_scramble_round_trips_through_scramble_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = chessgon(&["scramble-catalog", "--name", "k33", "--rows", "3", "--cols", "3"]);
    let v = json(&out);
    assert_eq!(v["order"]["order"], 5);
    let path = dir.path().join("s.json");
    fs::write(&path, &out.stdout).unwrap();
    let r = json(&chessgon(&["scramble-order", "--input", path.to_str().unwrap()]));
    assert_eq!(r["order"], 5);
}

#[test]
fn tcd_width_from_file_and_catalogue() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("p3.txt");
    fs::write(&g, "3\n0 1\n1 2\n").unwrap();
    let t = dir.path().join("t.json");
    fs::write(&t, r#"{"tree_links": [[0, 1]], "assignment": [0, 1, 1]}"#).unwrap();
    let v = json(&chessgon(&["tcd-width", "--graph", g.to_str().unwrap(), "--tcd", t.to_str().unwrap()]));
    assert_eq!(v["width"], 2);
    let v = json(&chessgon(&["tcd-width", "--name", "fig11", "--rows", "3", "--cols", "4"]));
    assert_eq!(v["width"], 6);
}

#[test]
fn diagonals_of_a_six_by_four_torus() {
    let v = json(&chessgon(&["diagonals", "--rows", "4", "--cols", "6"]));
    assert_eq!(v["count"], 2);
    assert_eq!(v["length"], 12);
    assert_eq!(v["intersections"]["same_colour_pairs_meet"], true);
}

#[test]
fn bad_input_exits_with_an_error() {
    let out = chessgon(&["rank", "--piece", "king", "--rows", "2", "--cols", "2", "--divisor", "[1,2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = chessgon(&["gen", "--rows", "2", "--cols", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_exit_code_reflects_mismatches() {
    let out = chessgon(&["reproduce", "--suite", "fast", "--json"]);
    let rows: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    let mismatches = rows.iter().filter(|r| r["status"] == "mismatch").count();
    assert!(rows.len() > 50);
    assert_eq!(out.status.success(), mismatches == 0);
    for r in &rows {
        assert_eq!(r["status"] == "match", r["computed"] == r["expected"], "{r}");
    }
}
