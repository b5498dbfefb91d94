use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value as Json;
use sha2::{Digest, Sha256};

const INPUTS: &str = "tests/golden/inputs";

fn input(name: &str) -> String {
    format!("{INPUTS}/{name}")
}

fn cpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpa"))
        .args(args)
        .env_remove(cpa::cli::REPORT_DIR_ENV)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Json {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn check_exit_codes() {
    let ring = input("ring4.json");
    let k4 = input("k4.json");
    let o = cpa(&["check", &ring, "--f", "1", "--json"]);
    assert_eq!(code(&o), 1);
    let w = &json(&o)["result"]["report"]["witness"];
    assert_eq!(w["F"], serde_json::json!([]));
    assert_eq!(w["L"], serde_json::json!([0, 1]));
    assert_eq!(w["R"], serde_json::json!([2, 3]));
    assert_eq!(code(&cpa(&["check", &k4, "--f", "2"])), 0);

    let o = cpa(&["check", &ring, "--f", "1", "--oracle", "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["result"]["oracle"]["agrees"], Json::Bool(true));
}

#[test]
fn fault_model_is_required() {
    let o = cpa(&["check", &input("ring4.json")]);
    assert_eq!(code(&o), 2);
    let o = cpa(&["check", &input("ring4.json"), "--f", "1", "--domain", &input("domain_k4.json")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn maxf_values() {
    let f = |name: &str| {
        let o = cpa(&["maxf", &input(name), "--json"]);
        assert_eq!(code(&o), 0);
        json(&o)["result"]["max_f"].clone()
    };
    assert_eq!(f("k4.json")["all_f"], Json::Bool(true));
    assert_eq!(f("ring4.json")["f"], serde_json::json!(0));
    assert_eq!(f("edgeless2.json")["f"], serde_json::json!(-1));
}

#[test]
fn simulate_exit_codes() {
    assert_eq!(code(&cpa(&["simulate", &input("star_cpa.json")])), 0);
    let o = cpa(&["simulate", &input("ring4_cpa.json"), "--json"]);
    assert_eq!(code(&o), 1);
    let stuck = &json(&o)["result"]["verdict"]["termination"]["stuck_nodes"];
    assert_eq!(stuck, &serde_json::json!([2, 3]));
    let o = cpa(&["simulate", &input("radio_silent.json"), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["verdict"]["agreement"]["value"], Json::String("default".into()));
}

#[test]
fn malformed_inputs_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"n\": 3,\n  \"source\": 0,\n  \"edges\": [[0, 1],\n}").unwrap();
    let o = cpa(&["check", bad.to_str().unwrap(), "--f", "0"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5"), "{err}");

    let o = cpa(&["simulate", &input("k4.json")]);
    assert_eq!(code(&o), 2);
    let o = cpa(&["check", "/nonexistent/graph.json", "--f", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn search_exit_codes() {
    let ring = input("ring4.json");
    let k4 = input("k4.json");
    assert_eq!(code(&cpa(&["search", &ring, "--f", "1", "--protocol", "cpa"])), 1);
    assert_eq!(code(&cpa(&["search", &k4, "--f", "1", "--protocol", "cpa", "--depth", "2"])), 0);
    assert_eq!(code(&cpa(&["search", &k4, "--f", "1", "--protocol", "cpa", "--budget", "3"])), 3);

    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("k8.json");
    let o = cpa(&["gen", "complete", "--n", "8", "-o", big.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = cpa(&["search", big.to_str().unwrap(), "--f", "2", "--protocol", "cpa"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn search_witness_replays_through_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("w.json");
    let o = cpa(&[
        "search",
        &input("fan_in5.json"),
        "--f",
        "1",
        "--protocol",
        "cpa",
        "--json",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let found = json(&o)["result"]["outcome"]["verdict"].clone();
    let o = cpa(&["simulate", witness.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["result"]["verdict"], found);
}

fn sha256_hex(path: &Path) -> String {
    hex::encode(Sha256::digest(std::fs::read(path).unwrap()))
}

#[test]
fn report_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let graph = input("k4.json");
    let o = Command::new(env!("CARGO_BIN_EXE_cpa"))
        .args(["check", &graph, "--f", "1"])
        .env(cpa::cli::REPORT_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let files: Vec<PathBuf> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let name = files[0].file_name().unwrap().to_str().unwrap().to_string();
    assert!(name.starts_with("check-") && name.ends_with(".json"), "{name}");
    let report: Json = serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
    assert_eq!(report["inputs"][0]["sha256"], Json::String(sha256_hex(Path::new(&graph))));
    assert_eq!(report["exit_code"], serde_json::json!(0));
    assert!(report.get("elapsed_ms").is_none());
}

#[test]
fn explicit_report_path_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = cpa(&["maxf", &input("ring4.json"), "--timing", "--report", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report: Json = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report["elapsed_ms"].is_u64());
}

#[test]
fn text_and_json_reports_carry_the_same_fields() {
    let graph = input("band6.json");
    let text = String::from_utf8(cpa(&["check", &graph, "--f", "1"]).stdout).unwrap();
    let report = json(&cpa(&["check", &graph, "--f", "1", "--json"]));
    assert!(text.contains(&format!("exit_code: {}", report["exit_code"])));
    assert!(text.contains(report["inputs"][0]["sha256"].as_str().unwrap()));
    assert!(text.contains(&format!("report.holds: {}", report["result"]["report"]["holds"])));
}

#[test]
fn reports_reproduce_byte_for_byte() {
    let a = cpa(&["search", &input("k4.json"), "--f", "1", "--protocol", "radio-bb", "--depth", "1", "--json"]);
    let b = cpa(&["search", &input("k4.json"), "--f", "1", "--protocol", "radio-bb", "--depth", "1", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), code(&b));
}

#[test]
fn gen_to_file_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.json");
    let o = cpa(&["gen", "grid-torus", "--rows", "3", "--cols", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&cpa(&["check", path.to_str().unwrap(), "--f", "1"])), 0);
    assert_eq!(code(&cpa(&["check", path.to_str().unwrap(), "--f", "2"])), 1);

    let a = cpa(&["gen", "random", "--n", "7", "--p", "0.4", "--seed", "11"]);
    let b = cpa(&["gen", "random", "--n", "7", "--p", "0.4", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let g = cpa::graph::parse_graph(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(g.n(), 7);
}
