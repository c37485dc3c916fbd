use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const E3: &str = "O1+U2+O3+U1+O2+U3+";
/// Not reduced by the search at small budgets.
const STUBBORN: &str = "U1-O2+O3-U4+U3-O5-U2+U6-O1-O6-O4+U5-";

fn knotoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotoid"))
        .args(args)
        .env_remove("KNOTOID_MAX_NODES")
        .env_remove("KNOTOID_MAX_DEPTH")
        .env_remove("KNOTOID_MAX_CHORDS")
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn validate_files() {
    let dir = TempDir::new().unwrap();
    let ok = knotoid(&["validate", &write(&dir, "ok.txt", "O1+U1+\n")]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = knotoid(&["validate", &write(&dir, "bad.txt", "O1+O1+\n")]);
    assert_eq!(bad.status.code(), Some(1));
    let out = lines(&bad);
    assert_eq!(out[0]["record"], 1);
    assert_eq!(out[0]["error"]["kind"], "ChordArity");
    let empty = knotoid(&["validate", &write(&dir, "empty.txt", "")]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(empty.stdout.is_empty());
    let json = knotoid(&["validate", &write(&dir, "codes.json", r#"["O1+U1+", "O2-U2-"]"#)]);
    assert_eq!(json.status.code(), Some(0));
    assert_eq!(lines(&json).len(), 2);
    let missing = knotoid(&["validate", "/nonexistent/codes.txt"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn invariant_reports() {
    let out = knotoid(&["invariants", "--code", E3, "--code", ""]);
    assert_eq!(out.status.code(), Some(0));
    let rows = lines(&out);
    assert_eq!(rows[0]["cr"], 3);
    assert_eq!(rows[0]["d"], 1);
    assert_eq!(rows[0]["alternating"], true);
    assert_eq!(rows[1]["cr"], 0);
    assert_eq!(rows[1]["descending"], true);
    assert_eq!(rows[1]["bound_half_cr"], Value::Null);

    let dir = TempDir::new().unwrap();
    let corpus = knotoid(&["enumerate", "--chords", "3"]);
    let path = write(&dir, "n3.txt", &String::from_utf8(corpus.stdout).unwrap());
    let checked = knotoid(&["invariants", "--check", &path]);
    assert_eq!(checked.status.code(), Some(0));
    assert_eq!(lines(&checked).len(), 960);

    let pretty = knotoid(&["invariants", "--pretty", "--code", E3]);
    assert!(String::from_utf8_lossy(&pretty.stdout).starts_with("code"));
}

#[test]
fn simplify_and_verify_roundtrip() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    let out = knotoid(&["simplify", "--code", "U1+O1+", "--cert-out", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["status"], "trivial");
    let verified = knotoid(&["verify-cert", cert.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(lines(&verified)[0]["final"], "");
    assert_eq!(lines(&verified)[0]["relation"]["relation"], "plus_welded");

    // several records produce an array
    let certs = dir.path().join("certs.json");
    let out = knotoid(&["simplify", "--code", "O1+O2+U1+U2+", "--code", E3, "--cert-out", certs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&certs).unwrap();
    assert!(text.trim_start().starts_with('['));
    let verified = knotoid(&["verify-cert", certs.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(lines(&verified).len(), 2);
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("cert.json");
    knotoid(&["simplify", "--code", "O1+O2+U1+U2+", "--cert-out", cert.to_str().unwrap()]);
    let mut value: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    value["steps"][0]["key"] = Value::String("O1+U1+".into());
    fs::write(&cert, value.to_string()).unwrap();
    let out = knotoid(&["verify-cert", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let row = &lines(&out)[0];
    assert_eq!(row["error"]["error"], "key_mismatch");
    assert_eq!(row["error"]["index"], 0);
}

#[test]
fn unknown_verdicts_exit_two() {
    let out = knotoid(&["simplify", "--code", STUBBORN, "--max-nodes", "300", "--max-depth", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(lines(&out)[0]["status"], "unknown");
    // invalid input outranks an unknown verdict
    let out = knotoid(&["simplify", "--code", STUBBORN, "--code", "O1+", "--max-nodes", "300"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknot_reports_bounds() {
    let out = knotoid(&["unknot", "--code", E3, "--op", "change", "--max-k", "2", "--max-nodes", "2000", "--max-depth", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &lines(&out)[0];
    assert!(row["upper_bound"].as_u64().unwrap() <= 1);
    assert_eq!(row["op_kind"], "change");

    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("w.json");
    let out = knotoid(&[
        "unknot", "--code", STUBBORN, "--op", "virtualize", "--max-nodes", "50", "--max-depth", "2",
        "--cert-out", cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let verified = knotoid(&["verify-cert", cert.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(lines(&verified)[0]["relation"]["relation"], "after_modifications");
}

#[test]
fn closure_and_enumerate() {
    let out = knotoid(&["closure", "--code", "O1+O2+U1+U2+", "--code", E3]);
    let rows = lines(&out);
    assert_eq!(rows[0]["monotone_closure"], true);
    assert_eq!(rows[1]["cyclic_d"], 1);

    let out = knotoid(&["enumerate", "--chords", "2"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 48);
    let a = knotoid(&["enumerate", "--chords", "5", "--random", "4", "--seed", "9"]);
    let b = knotoid(&["enumerate", "--chords", "5", "--random", "4", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8_lossy(&a.stdout).lines().count(), 4);
    let too_big = knotoid(&["enumerate", "--chords", "4"]);
    assert_eq!(too_big.status.code(), Some(1));
    let raised = knotoid(&["enumerate", "--chords", "4", "--ceiling", "4"]);
    assert_eq!(String::from_utf8_lossy(&raised.stdout).lines().count(), 26880);
}

#[test]
fn check_suites() {
    let out = knotoid(&["check", "--suite", "lemma41", "--chords", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["passed"], true);
    let out = knotoid(&["check", "--suite", "all", "--chords", "6", "--random", "40", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out).len(), 11);
    let out = knotoid(&["check", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_configuration() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.toml", "max_nodes = 5\nmax_depth = 1\n");
    let out = knotoid(&["--config", &good, "simplify", "--code", STUBBORN]);
    assert_eq!(out.status.code(), Some(2));
    let bad = write(&dir, "bad.toml", "max_nodes = 0\n");
    assert_eq!(knotoid(&["--config", &bad, "simplify", "--code", "O1+U1+"]).status.code(), Some(3));
    let broken = write(&dir, "broken.toml", "max_nodes = [\n");
    assert_eq!(knotoid(&["--config", &broken, "simplify", "--code", "O1+U1+"]).status.code(), Some(3));
    assert_eq!(knotoid(&["simplify", "--code", "O1+U1+", "--max-chords", "0"]).status.code(), Some(3));

    let env = Command::new(env!("CARGO_BIN_EXE_knotoid"))
        .args(["simplify", "--code", "O1+U1+"])
        .env("KNOTOID_MAX_DEPTH", "0")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
    // flags beat the environment
    let env = Command::new(env!("CARGO_BIN_EXE_knotoid"))
        .args(["simplify", "--code", "O1+U1+", "--max-depth", "2"])
        .env("KNOTOID_MAX_DEPTH", "0")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(0));
}

#[test]
fn stdin_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_knotoid"))
        .args(["closure", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"O1+U1+\nU1-O1-\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out).len(), 2);
}

#[test]
fn search_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let codes: String = (0..16).map(|s| format!("{}\n", random_line(s))).collect();
    let path = write(&dir, "codes.txt", &codes);
    for args in [
        vec!["simplify", path.as_str(), "--max-nodes", "400", "--max-depth", "3"],
        vec!["unknot", path.as_str(), "--max-nodes", "100", "--max-depth", "2", "--max-k", "2"],
    ] {
        let a = knotoid(&args);
        let b = Command::new(env!("CARGO_BIN_EXE_knotoid"))
            .args(&args)
            .env("RAYON_NUM_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(a.stdout, b.stdout);
    }
}

fn random_line(seed: u64) -> String {
    let out = knotoid(&["enumerate", "--chords", "5", "--random", "1", "--seed", &seed.to_string()]);
    String::from_utf8(out.stdout).unwrap().trim().to_owned()
}

#[test]
fn help_exits_zero() {
    assert_eq!(knotoid(&["--help"]).status.code(), Some(0));
    assert!(!Path::new(env!("CARGO_BIN_EXE_knotoid")).as_os_str().is_empty());
}
