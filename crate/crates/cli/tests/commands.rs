use std::path::PathBuf;
use std::process::{Command, Output};

use minkowski_core::bk::Poset;
use minkowski_core::io::{parse_poset, parse_tuple};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn minkowski(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minkowski"))
        .args(args)
        .env_remove("MINKOWSKI_SUBSET_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = minkowski(&full);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn analyze_ex1() {
    let r = json(&["analyze", &path("ex1.tuple")]);
    assert_eq!(r["bases"], serde_json::json!(["{0,2}", "{1,2}"]));
    assert_eq!(r["circuits"], serde_json::json!(["{0,1}"]));
    assert_eq!(r["coloops"], "{2}");
    assert_eq!(r["loops"], "{}");
    assert_eq!(r["basis_defect"], 0);
    assert_eq!(r["rank"], 2);
    assert_eq!(r["span_dim"], 2);
}

#[test]
fn analyze_ex2() {
    let r = json(&["analyze", &path("ex2.tuple"), "--subset", "0,2"]);
    assert_eq!(r["basis_defect"], 1);
    assert_eq!(r["max_essential"], "{0,1}");
    assert_eq!(r["max_bk_per_basis"]["{0,2}"], "{0}");
    assert_eq!(r["max_bk_per_basis"]["{1,2}"], "{1}");
    assert_eq!(r["quotient_by_essential"]["independent"], true);
    assert_eq!(r["quotient_by_essential"]["entry_dims"], serde_json::json!([2]));
    assert_eq!(r["subsets"]["{0,2}"]["defect"], 1);
    assert_eq!(r["subsets"]["{0,2}"]["independent"], true);
}

#[test]
fn analyze_empty_tuple() {
    let r = json(&["analyze", &path("empty.tuple")]);
    assert_eq!(r["rank"], 0);
    assert_eq!(r["bases"], serde_json::json!(["{}"]));
    assert_eq!(r["circuits"], serde_json::json!([]));
    assert!(r["max_essential"].is_null());
}

#[test]
fn text_report_is_sorted() {
    let o = minkowski(&["analyze", &path("ex1.tuple")]);
    let text = stdout(&o);
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with(' '))
        .map(|l| l.split(':').next().unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(text.contains("bases: [{0,2}, {1,2}]\n"));
}

#[test]
fn bk_ex3() {
    let r = json(&["bk", &path("ex3.tuple")]);
    let blocks: Vec<&str> = r["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["block"].as_str().unwrap())
        .collect();
    assert_eq!(blocks, ["{0}", "{1,2}"]);
    assert_eq!(r["poset"]["size"], 2);
    assert_eq!(r["poset"]["covers"].as_array().unwrap().len(), 1);
    assert_eq!(r["coordinate_basis"]["identity"], true);
}

#[test]
fn bk_flag_is_a_chain() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&["bk", &path("flag.tuple"), "--dot-dir", dir.path().to_str().unwrap()]);
    assert_eq!(r["poset"]["size"], 3);
    assert_eq!(r["poset"]["covers"].as_array().unwrap().len(), 2);
    let dot = std::fs::read_to_string(dir.path().join("bk_poset.dot")).unwrap();
    assert!(dot.contains("\"{0}\" -> \"{0,1}\";"));
    assert!(dot.contains("\"{0,1}\" -> \"{0,1,2}\";"));
    assert!(dir.path().join("bk_lattice.dot").exists());
}

#[test]
fn bk_rejects_dependent_tuple() {
    let o = minkowski(&["bk", &path("dependent.tuple")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("subtuple {0,1} has defect -1"), "{}", stderr(&o));
}

fn realize_round_trip(poset: &str, field: &str) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.tuple");
    let o = minkowski(&[
        "realize",
        &path(poset),
        "--field",
        field,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("round trip: PASS"));
    let t = parse_tuple(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let p: Poset = parse_poset(&std::fs::read_to_string(fixture(poset)).unwrap()).unwrap();
    let r = json(&["bk", out.to_str().unwrap()]);
    assert_eq!(r["poset"]["size"], p.len());
    assert_eq!(r["poset"]["covers"].as_array().unwrap().len(), p.covers().len());
    assert_eq!(t.len(), p.len());
}

#[test]
fn realize_chain() {
    realize_round_trip("chain2.poset", "rational");
    let o = minkowski(&["realize", &path("chain2.poset")]);
    let t = parse_tuple(&stdout(&o)).unwrap();
    let dims: Vec<usize> = t.entries().iter().map(|e| e.dim()).collect();
    assert_eq!(dims, [1, 2]);
    assert_eq!(t.ambient_dim(), 2);
}

#[test]
fn realize_antichain() {
    realize_round_trip("antichain3.poset", "gf2");
    let o = minkowski(&["realize", &path("antichain3.poset")]);
    let t = parse_tuple(&stdout(&o)).unwrap();
    assert_eq!(t.ambient_dim(), 3);
    assert!(t.entries().iter().all(|e| e.dim() == 1));
}

#[test]
fn realize_vee() {
    realize_round_trip("vee.poset", "gf5");
    let o = minkowski(&["realize", &path("vee.poset")]);
    let t = parse_tuple(&stdout(&o)).unwrap();
    let dims: Vec<usize> = t.entries().iter().map(|e| e.dim()).collect();
    assert_eq!(dims, [1, 1, 3]);
}

#[test]
fn realize_rejects_cycle() {
    let o = minkowski(&["realize", &path("cyclic.poset")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cycle"));
}

#[test]
fn polymatroid_axes_partition() {
    let r = json(&["polymatroid", &path("axes_gf2.tuple"), "--partition"]);
    let sizes = r["partition"]["block_sizes"].as_object().unwrap();
    assert_eq!(sizes.len(), 4);
    assert!(sizes.values().all(|v| v == 1));
    assert_eq!(r["partition"]["points"], 4);
    assert_eq!(r["partition"]["unassigned"], 0);
}

#[test]
fn polymatroid_ex1_flats() {
    let r = json(&["polymatroid", &path("ex1.tuple"), "--flats"]);
    assert_eq!(r["flats"]["count"], 3);
    let flats: Vec<&str> = r["flats"]["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["flat"].as_str().unwrap())
        .collect();
    assert_eq!(flats, ["{}", "{0,1}", "{0,1,2}"]);
    assert!(r.get("rank_equality").is_none());
}

#[test]
fn polymatroid_dual_passes() {
    for f in ["ex1.tuple", "ex2.tuple", "ex3.tuple", "axes_gf2.tuple", "empty.tuple"] {
        let o = minkowski(&["polymatroid", &path(f), "--dual"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("rank_equality: PASS"), "{f}");
    }
}

#[test]
fn polymatroid_partition_errors() {
    let o = minkowski(&["polymatroid", &path("ex1.tuple"), "--partition"]);
    assert_eq!(o.status.code(), Some(2));
    let o = minkowski(&["polymatroid", &path("axes_gf2.tuple"), "--partition", "--point-cap", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes() {
    let o = minkowski(&[
        "verify", "--seed", "1", "--cases", "200", "--field", "gf2", "--dim", "4", "--n", "6",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: PASS"));
}

#[test]
fn verify_zero_cases() {
    let r = json(&["verify", "--cases", "0"]);
    assert_eq!(r["failures"], 0);
    assert!(r["checks"]
        .as_object()
        .unwrap()
        .values()
        .all(|c| c["run"] == 0));
}

#[test]
fn verify_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.toml");
    std::fs::write(&cfg, "seed = 9\ncases = 20\nfield = \"gf3\"\ndim = 3\nn = 4\n").unwrap();
    let out = dir.path().join("report.txt");
    let r = json(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--cases",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r["config"]["seed"], 9);
    assert_eq!(r["config"]["cases"], 10);
    assert_eq!(r["config"]["field"], "gf 3");
    assert!(std::fs::read_to_string(out).unwrap().contains("\"seed\": 9"));
}

#[test]
fn verify_mutation_writes_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let o = minkowski(&[
        "verify",
        "--cases",
        "20",
        "--mutate",
        "--counterexample-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("result: FAIL"));
    let files: Vec<PathBuf> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert!(!files.is_empty());
    let first = std::fs::read_to_string(&files[0]).unwrap();
    assert!(parse_tuple(&first).is_ok());

    let replay = minkowski(&["verify", "--replay", files[0].to_str().unwrap(), "--mutate"]);
    assert_eq!(replay.status.code(), Some(1));
    let clean = minkowski(&["verify", "--replay", files[0].to_str().unwrap()]);
    assert_eq!(clean.status.code(), Some(0), "{}", stdout(&clean));
}

#[test]
fn parse_error_reports_position() {
    let o = minkowski(&["analyze", &path("bad.tuple")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_input_error() {
    let o = minkowski(&["analyze", "/nonexistent/x.tuple"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn subset_cap_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_minkowski"))
        .args(["analyze", &path("ex1.tuple")])
        .env("MINKOWSKI_SUBSET_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_minkowski"))
        .args(["analyze", &path("ex1.tuple")])
        .env("MINKOWSKI_SUBSET_CAP", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["analyze", "ex2.tuple"],
        vec!["bk", "flag.tuple"],
        vec!["polymatroid", "axes_gf2.tuple", "--partition"],
    ] {
        let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        full[1] = path(args[1]);
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let a = minkowski(&refs);
        let b = minkowski(&refs);
        assert_eq!(a.stdout, b.stdout);
    }
    let a = minkowski(&["--format", "json", "verify", "--seed", "3", "--cases", "30"]);
    let b = minkowski(&["--format", "json", "verify", "--seed", "3", "--cases", "30"]);
    assert_eq!(a.stdout, b.stdout);
}
