use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_enriques")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = run(&a);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}; stdout {out}; stderr {err}"));
    (code, v)
}

fn verdict(v: &Value, name: &str) -> bool {
    v["verdicts"].as_array().unwrap().iter().find(|x| x["name"] == name).unwrap_or_else(|| panic!("no verdict {name}"))["value"]
        .as_bool()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("enriques-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, file: &str, body: &str) -> String {
    let p = dir.join(file);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn theorem_a_envelope() {
    let (code, v) = run_json(&["theorem-a", "--rho", "20", "--params", "1,0,1", "--label", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "theorem-a");
    assert_eq!(v["payload"]["images"], serde_json::json!([[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0]]));
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["value"] == true));
    assert_eq!(v["runtime_ms"], 0);
    assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn epsilon_and_class_group() {
    let (code, out, _) = run(&["epsilon", "--vector", "1,0,0,0,0,0,0,0,0,0,0,0"]);
    assert_eq!((code, out.trim()), (0, "1"));
    let (code, v) = run_json(&["class-group", "-D", "-23"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["class_number"], 3);
    assert_eq!(v["payload"]["ray_class2_order"], 3);
    let (code, v) = run_json(&["theorem-c", "--gram", "2,1;1,10"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["applies"], true);
    assert_eq!(v["payload"]["index_k2_k1"], 3);
    let (_, v) = run_json(&["theorem-c", "--gram", "2,1;1,2"]);
    assert_eq!(v["payload"]["applies"], false);
}

#[test]
fn deterministic_output() {
    let args = ["brauer-image", "--rho", "18", "--params", "-1,3,-1", "--json"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn brauer_counts_match_fixtures() {
    let (code, v) = run_json(&["brauer-image", "--rho", "17", "--params", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["count"], 31);
    assert!(verdict(&v, "count_matches_fixture"));
    let (code, v) = run_json(&["brauer-image", "--rho", "18", "--params", "-1,3,-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["count"], 15);
}

#[test]
fn im_phi_bound_fixture() {
    let (code, v) = run_json(&["im-phi-bound", "--gram", "2,0;0,6"]);
    assert_eq!(code, 0);
    assert!(verdict(&v, "trivial_for_single_quotient_fixture"));
    let (_, v) = run_json(&["im-phi-bound", "--gram", "4,0;0,4"]);
    assert_eq!(v["payload"]["order"], 4);
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let good = write(&dir, "good.json", r#"{"source_gram": [[4,0],[0,4]], "images": [[1,2,0,0,0,0,0,0,0,0,0,0],[0,0,1,1,0,0,0,0,0,0,0,0]]}"#);
    let mismatch = write(&dir, "bad.json", r#"{"source_gram": [[4,0],[0,4]], "images": [[1,1,0,0,0,0,0,0,0,0,0,0],[0,0,1,1,0,0,0,0,0,0,0,0]]}"#);
    let imprimitive = write(&dir, "imp.json", r#"{"source_gram": [[16,0],[0,4]], "images": [[2,4,0,0,0,0,0,0,0,0,0,0],[0,0,1,1,0,0,0,0,0,0,0,0]]}"#);
    let malformed = write(&dir, "malformed.json", "{");
    assert_eq!(run(&["verify-embedding", &good]).0, 0);
    assert_eq!(run(&["verify-embedding", &mismatch]).0, 1);
    let (code, v) = run_json(&["verify-embedding", &imprimitive]);
    assert_eq!(code, 1);
    assert!(!verdict(&v, "primitive"));
    assert_eq!(run(&["verify-embedding", &malformed]).0, 2);
    assert_eq!(run(&["nikulin-exists", "--sig", "0,1", "--gram", "2"]).0, 1);
    assert_eq!(run(&["nikulin-exists", "--sig", "1,0", "--gram", "2"]).0, 0);
    assert_eq!(run(&["theorem-a", "--rho", "20", "--params", "-1,0,1", "--label", "1,0"]).0, 2);
    assert_eq!(run(&["theorem-a", "--rho", "20", "--params", "1,0,1", "--label", "0,0"]).0, 2);
    assert_eq!(run(&["class-group", "-D", "-12"]).0, 2);
    assert_eq!(run(&["standard-lattice", "--name", "X"]).0, 2);
    assert_eq!(run(&["roots", "--gram", "0,1;1,0"]).0, 2);
    assert_eq!(run(&["accept", "nonsense"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn lattice_commands() {
    let (code, v) = run_json(&["standard-lattice", "--name", "N"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["lattice"]["signature"], serde_json::json!([2, 10]));
    assert_eq!(v["payload"]["lattice"]["discr"], "1024");
    let (code, v) = run_json(&["roots", "--gram", "-2,1;1,-2"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["count"], 6);
    let dir = scratch("fqf");
    let fqf = write(&dir, "q.json", r#"{"invariant_factors": [2], "q": [[[1, 2]]]}"#);
    let (code, v) = run_json(&["nikulin-exists", "--sig", "1,0", "--fqf", &fqf]);
    assert_eq!(code, 0);
    assert!(verdict(&v, "exists"));
}

#[test]
fn sublattice_and_transfer() {
    let dir = scratch("transfer");
    let lattice = write(&dir, "l.json", r#"{"gram": [[4,0],[0,4]]}"#);
    let (code, v) = run_json(&["sublattice", "--p", "3", "--lattice", &lattice]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["gram"], serde_json::json!([[36, 0], [0, 4]]));
    let basis = write(&dir, "b.json", &serde_json::json!({"basis": v["payload"]["basis"]}).to_string());
    let (code, v) = run_json(&["condition-star", "--lattice", &lattice, "--sublattice", &basis]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["index"], 3);
    let two = write(&dir, "two.json", r#"{"basis": [[2,0],[0,1]]}"#);
    assert_eq!(run(&["condition-star", "--lattice", &lattice, "--sublattice", &two]).0, 1);

    let emb = write(&dir, "e.json", r#"{"source_gram": [[4,0],[0,4]], "images": [[1,2,0,0,0,0,0,0,0,0,0,0],[0,0,1,1,0,0,0,0,0,0,0,0]]}"#);
    let (code, v) = run_json(&["transfer", "--direction", "down", "--lattice", &lattice, "--sublattice", &basis, "--embedding", &emb]);
    assert_eq!(code, 0, "{v}");
    let down = v["payload"]["datum"].clone();
    let order = v["payload"]["k_discriminant_order"].as_u64().unwrap();
    let datum = write(&dir, "d.json", &down.to_string());
    let (code, v) = run_json(&["transfer", "--direction", "up", "--lattice", &lattice, "--sublattice", &basis, "--datum", &datum]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["payload"]["k_discriminant_order"].as_u64().unwrap() * 9, order);
}

#[test]
fn accept_suite() {
    let (code, out, _) = run(&["accept", "theorem-c"]);
    assert_eq!(code, 0);
    assert!(out.contains("criterion 11 PASS"));
}
