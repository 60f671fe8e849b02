use std::process::{Command, Output};

use serde_json::Value;

fn qcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcone"))
        .args(args)
        .env_remove("QCONE_CACHE_DIR")
        .output()
        .expect("run qcone")
}

fn stdout(args: &[&str]) -> String {
    let out = qcone(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    serde_json::from_str(&stdout(&a)).unwrap()
}

#[test]
fn facet_counts() {
    assert_eq!(stdout(&["facets", "--type", "G2", "--points", "3"]).lines().count(), 48);
    assert_eq!(stdout(&["facets", "--type", "D4", "--points", "3"]).lines().count(), 771);
    assert_eq!(stdout(&["facets", "--type", "D", "--rank", "4"]).lines().count(), 771);
}

#[test]
fn g2_tables() {
    let doc = json(&["tables", "--type", "G2"]);
    assert_eq!(doc["schema"], 1);
    let g = &doc["groups"][0];
    assert_eq!(g["facets"]["total"], 48);
    let report = &g["faces"][0]["report"];
    assert_eq!(report["type_one"].as_array().unwrap().len(), 5);
    let induced = report["induced"].as_array().unwrap();
    assert_eq!(induced.len(), 4);
    let nonzero: Vec<&str> = induced
        .iter()
        .filter(|r| r["kind"] != "zero")
        .map(|r| r["image"].as_str().unwrap())
        .collect();
    assert_eq!(nonzero, ["(ω2, ω2, 2ω1, 2)"]);
    assert_eq!(g["non_regular"][0]["ray"], "(ω2, ω2, ω2, 2)");
}

#[test]
fn invariants_and_blocks() {
    let gw = ["gw", "--type", "D4", "--parabolic", "1", "--classes", "s1 | s2 s1 | s4 s2 s1", "--degree", "1"];
    assert_eq!(stdout(&gw), "1\n");
    let mut deformed = gw.to_vec();
    deformed.push("--deformed");
    assert_eq!(stdout(&deformed), "1\n");
    let w = "[0,1,0,0];[0,1,0,0];[0,1,0,0]";
    assert_eq!(stdout(&["blocks", "--type", "D4", "--weights", w, "--level", "2"]), "0\n");
    let doc = json(&["blocks", "--type", "D4", "--weights", "[0,2,0,0];[0,2,0,0];[0,2,0,0]", "--level", "4"]);
    assert!(doc["dim"].as_u64().unwrap() >= 1);
    assert_eq!(doc["root_lattice"], true);
    let m = json(&["member", "--type", "D4", "--weights", w, "--level", "2"]);
    assert_ne!(m["status"], "outside");
    let m = json(&["member", "--type", "D4", "--weights", "[1,0,0,0];[0,0,0,0];[0,0,0,0]", "--level", "1"]);
    assert_eq!(m["status"], "outside");
}

#[test]
fn quantum_product_of_points_on_the_line() {
    assert_eq!(stdout(&["qmul", "--type", "A1", "--parabolic", "1", "--classes", "e | e"]), "q^{(1)} s1 : 1\n");
}

#[test]
fn face_report() {
    let out = stdout(&[
        "face", "--type", "D4", "--parabolic", "1", "--classes", "s1 | s2 s1 | s4 s2 s1", "--degree", "1", "--report",
    ]);
    assert!(out.contains("w_mu = s2 s3 s4 s2"));
    assert!(out.contains("Ind(M) = (ω2, ω3, ω3, 2)"));
    assert!(out.contains("(ω4^L, ω3^L, 0) ⊗ M"));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        vec!["blocks", "--type", "D4", "--weights", "", "--level", "2"],
        vec!["blocks", "--type", "D4", "--weights", "[0,3,0,0]", "--level", "2"],
        vec!["gw", "--type", "X9", "--parabolic", "1", "--classes", "e | e | e"],
        vec!["gw", "--type", "D4", "--parabolic", "1", "--classes", "s2 | e | e"],
        vec!["facets", "--type", "G2", "--points", "2"],
        vec!["face", "--type", "D4", "--parabolic", "1", "--classes", "e | e | e"],
        vec!["facets"],
    ] {
        let out = qcone(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn facet_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.json");
    let p = path.to_str().unwrap();
    stdout(&["facets", "--type", "G2", "--points", "3", "--json", p]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["facets"].as_array().unwrap().len(), 48);
    let direct = stdout(&["rays", "--type", "G2"]);
    let ingested = stdout(&["rays", "--facets-file", p]);
    assert_eq!(direct, ingested);
    assert_eq!(direct.lines().count(), 30);
}

#[test]
fn output_is_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let a = stdout(&["rays", "--type", "G2", "--non-regular"]);
    let b = stdout(&["rays", "--type", "G2", "--non-regular", "--cache-dir", cache]);
    let c = stdout(&["rays", "--type", "G2", "--non-regular", "--cache-dir", cache]);
    assert_eq!(a, b);
    assert_eq!(b, c);
    assert_eq!(a, "(ω2, ω2, ω2, 2)\n");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}
