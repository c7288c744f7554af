//! Golden runs through the full argument-parsing and artifact-writing path.
//!
//! Set `ROTASET_BLESS=1` to rewrite the checked-in golden files.

use std::path::{Path, PathBuf};

use serde_json::Value;

use super::execute;

fn run_in(dir: &Path, args: &[&str]) -> u8 {
    let mut full = vec!["rotaset", "--out", dir.to_str().unwrap()];
    full.extend_from_slice(args);
    execute(full)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden(produced: &Path, name: &str) {
    let golden = golden_dir().join(name);
    let bytes = std::fs::read_to_string(produced).unwrap();
    if std::env::var_os("ROTASET_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&golden, &bytes).unwrap();
    }
    let expected = std::fs::read_to_string(&golden)
        .unwrap_or_else(|_| panic!("missing golden file {}", golden.display()));
    assert_eq!(bytes, expected, "{name} differs from its golden file");
}

#[test]
fn rotset_identity_is_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["rotset", "--map", "identity", "--grid", "8"]), 0);
    let out = read_json(&dir.path().join("rotset.json"));
    assert_eq!(out["estimate"]["hull"]["vertices"], serde_json::json!([[0.0, 0.0]]));
    assert_eq!(out["interior_nonempty"], false);
    assert!(dir.path().join("rotset_samples.csv").exists());
}

#[test]
fn rotset_rotation_is_a_point() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "rotset", "--map", "rotation", "--alpha", "0.41421356", "--beta", "0.73205081", "--grid",
        "16", "--svg",
    ];
    assert_eq!(run_in(dir.path(), &args), 0);
    let out = read_json(&dir.path().join("rotset.json"));
    let vertices = out["estimate"]["hull"]["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 1);
    let p = &vertices[0];
    assert!((p[0].as_f64().unwrap() - 0.41421356).abs() <= 1e-12);
    assert!((p[1].as_f64().unwrap() - 0.73205081).abs() <= 1e-12);
    assert_eq!(out["interior_nonempty"], false);
    let svg = std::fs::read_to_string(dir.path().join("rotset.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn periodic_lm_finds_the_four_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["periodic", "--map", "lm", "--period", "1", "--box", "2", "--seeds", "16", "--cover", "2x2"];
    assert_eq!(run_in(dir.path(), &args), 0);
    let out = read_json(&dir.path().join("periodic.json"));
    let orbits = out["search"]["orbits"].as_array().unwrap();
    let mut vectors: Vec<(i64, i64)> = orbits
        .iter()
        .map(|o| {
            let num = &o["rotation_vector"]["num"];
            assert_eq!(o["rotation_vector"]["den"], 1);
            assert!(o["residual"].as_f64().unwrap() <= 1e-9);
            (num[0].as_i64().unwrap(), num[1].as_i64().unwrap())
        })
        .collect();
    vectors.sort_unstable();
    assert_eq!(vectors, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    assert_eq!(out["parity"]["certificate"]["determinant"], 1);
    assert_eq!(out["realized_hull"]["vertices"].as_array().unwrap().len(), 4);
    check_golden(&dir.path().join("periodic.json"), "periodic_lm.json");
}

#[test]
fn entropy_identity_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["entropy", "--map", "identity", "--eps", "0.1,0.05", "--lengths", "1..12", "--resolution", "128"];
    assert_eq!(run_in(dir.path(), &args), 0);
    let out = read_json(&dir.path().join("entropy.json"));
    assert!(out["estimate"]["estimate"].as_f64().unwrap() <= 0.01);
    assert_eq!(out["constant_in_n"], true);
    let csv = std::fs::read_to_string(dir.path().join("entropy.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 12);
}

#[test]
fn entropy_rotation_golden() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["entropy", "--map", "rotation", "--eps", "0.2", "--lengths", "1..3", "--resolution", "32"];
    assert_eq!(run_in(dir.path(), &args), 0);
    check_golden(&dir.path().join("entropy.json"), "entropy_rotation.json");
}

#[test]
fn cover_rotation_fills_the_fourfold_cover() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cover", "--map", "rotation", "--factors", "2x2", "--iters", "1000000", "--iterate", "1", "--pgm"];
    assert_eq!(run_in(dir.path(), &args), 0);
    let out = read_json(&dir.path().join("cover.json"));
    let report = &out["iterates"][0]["report"];
    assert!(report["occupancy"].as_f64().unwrap() >= 0.99);
    assert_eq!(out["iterates"][0]["verdict"], "transitive_like");
    let pgm = std::fs::read_to_string(dir.path().join("cover.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n64 64\n255\n"));
}

#[test]
fn cover_identity_is_obstructed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cover", "--map", "identity", "--iters", "4096", "--iterate", "2"];
    assert_eq!(run_in(dir.path(), &args), 0);
    let out = read_json(&dir.path().join("cover.json"));
    assert_eq!(out["iterates"].as_array().unwrap().len(), 2);
    assert_eq!(out["iterates"][1]["verdict"], "obstructed");
}

#[test]
fn verify_properties() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let parity = ["verify", "--property", "parity", "--k2", "2,4", "--k3", "6,2"];
    assert_eq!(run_in(d, &parity), 0);
    let out = read_json(&d.join("verify.json"));
    assert_eq!(out["details"]["certificate"]["determinant"], -15);
    check_golden(&d.join("verify.json"), "verify_parity.json");

    let translation = ["verify", "--map", "lm", "--property", "translation", "--v", "1,0", "--grid", "16"];
    assert_eq!(run_in(d, &translation), 0);
    assert!(read_json(&d.join("verify.json"))["discrepancy"].as_f64().unwrap() <= 1e-9);

    let scaling = ["verify", "--map", "lm", "--property", "iterate-scaling", "--k", "2", "--grid", "16"];
    assert_eq!(run_in(d, &scaling), 0);

    let sandwich = ["verify", "--map", "rotation", "--property", "sandwich", "--grid", "8", "--seeds", "8"];
    assert_eq!(run_in(d, &sandwich), 0);
}

#[test]
fn verify_outside_tolerance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // the grid estimate of the LM set stops short of its fixed-point corners
    let args = ["verify", "--map", "lm", "--property", "sandwich", "--grid", "16", "--seeds", "8"];
    assert_eq!(run_in(dir.path(), &args), 1);
    assert_eq!(read_json(&dir.path().join("verify.json"))["pass"], false);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run_in(d, &["verify", "--property", "bogus"]), 2);
    assert_eq!(run_in(d, &["rotset", "--map", "nope"]), 2);
    assert_eq!(run_in(d, &["rotset", "--map", "rotation", "--amplitude", "2"]), 2);
    assert_eq!(run_in(d, &["rotset", "--map", "identity", "--horizons", "100"]), 2);
    assert_eq!(run_in(d, &["verify", "--property", "parity", "--k2", "1,0"]), 2);
    assert_eq!(run_in(d, &["rotset", "--grid", "many"]), 2);
    assert_eq!(run_in(d, &["frobnicate"]), 2);
    let blowup = ["rotset", "--map", "vertical_tent_shear", "--amplitude", "1e308", "--grid", "2"];
    assert_eq!(run_in(d, &blowup), 3);
    assert_eq!(run_in(d, &["maps-list"]), 0);
}

#[test]
fn map_file_and_config_override() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let map_file = d.join("map.json");
    std::fs::write(&map_file, r#"{"map": "rotation", "params": {"alpha": 0.25, "beta": 0.5}}"#).unwrap();
    let args = ["rotset", "--map-file", map_file.to_str().unwrap(), "--grid", "4"];
    assert_eq!(run_in(d, &args), 0);
    let out = read_json(&d.join("rotset.json"));
    assert_eq!(out["estimate"]["hull"]["vertices"], serde_json::json!([[0.25, 0.5]]));

    let cfg = d.join("cfg.json");
    std::fs::write(&cfg, r#"{"grid": 2, "map": {"map": "identity"}}"#).unwrap();
    let args = ["--config", cfg.to_str().unwrap(), "rotset", "--map", "lm", "--grid", "64"];
    assert_eq!(run_in(d, &args), 0);
    let out = read_json(&d.join("rotset.json"));
    assert_eq!(out["config"]["grid"], 2);
    assert_eq!(out["config"]["map"]["map"], "identity");

    std::fs::write(&cfg, r#"{"grid": "x"}"#).unwrap();
    assert_eq!(run_in(d, &["--config", cfg.to_str().unwrap(), "rotset"]), 2);
    std::fs::write(&map_file, r#"{"map": "rotation", "parms": {}}"#).unwrap();
    assert_eq!(run_in(d, &["rotset", "--map-file", map_file.to_str().unwrap()]), 2);
}

#[test]
fn saved_config_reproduces_artifacts() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let args = ["entropy", "--map", "lm", "--eps", "0.2,0.1", "--lengths", "2..5", "--resolution", "64"];
    assert_eq!(run_in(first.path(), &args), 0);
    let cfg = first.path().join("entropy_config.json");
    assert_eq!(run_in(second.path(), &["--config", cfg.to_str().unwrap(), "entropy", "--map", "identity"]), 0);
    for name in ["entropy.json", "entropy.csv", "entropy_config.json"] {
        let a = std::fs::read(first.path().join(name)).unwrap();
        let b = std::fs::read(second.path().join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}
