//! End-to-end runs of the verify binary: exit codes, report formats,
//! byte-level determinism, the root-datum file path, and the corrupted
//! negative control.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("verify-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn solomon_passes_and_reports_every_character() {
    let out = verify(&["solomon", "--type", "B", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("suite: solomon"));
    assert!(text.contains("χ5"), "all five characters appear:\n{text}");
    assert!(text.contains("result: PASS"));
}

#[test]
fn kato_affine_states_the_flag_bound() {
    let out = verify(&[
        "kato-affine",
        "--type",
        "A",
        "--rank",
        "1",
        "--lattice",
        "weight",
        "--q",
        "4",
        "--bound",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("ℓ(w) ≤ 2"));
}

#[test]
fn complex_reports_the_reduced_sphere_pattern() {
    let out = verify(&["complex", "--type", "A", "--rank", "3", "--I0", "1,3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("reduced Betti in degree 0"));
    assert!(text.contains("result: PASS"));

    // The rank-one sphere is the other boundary case of the family.
    let out = verify(&["complex", "--type", "A", "--rank", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn corrupt_sign_is_a_reported_failure_not_a_crash() {
    let out = verify(&["solomon", "--type", "A", "--rank", "2", "--corrupt-sign"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("NO"), "a failing record is printed");
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("FAIL at"), "the first witness is named: {err}");
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let args =
        ["kato-finite", "--type", "B", "--rank", "2", "--q", "4,9", "--format", "json"];
    let one = verify(&args);
    let two = verify(&args);
    assert_eq!(one.status.code(), Some(0), "{}", stdout(&one));
    assert_eq!(one.stdout, two.stdout, "deterministic payload");
    let v: serde_json::Value = serde_json::from_str(stdout(&one).trim()).unwrap();
    assert_eq!(v["suite"], "kato-finite");
    assert!(v["pass"].as_bool().unwrap());
    assert!(v["instance"].as_str().unwrap().contains("B2"));
    let rec = &v["records"][0];
    for field in ["witness", "lhs", "rhs", "pass"] {
        assert!(rec.get(field).is_some(), "record field {field}");
    }
}

#[test]
fn usage_errors_exit_two() {
    let out = verify(&["solomon", "--type", "Z", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = verify(&["solomon"]);
    assert_eq!(out.status.code(), Some(2), "--type or --datum is required");
    let out = verify(&["solomon", "--type", "A", "--rank", "2", "--q", "5"]);
    assert_eq!(out.status.code(), Some(2), "q must be a perfect square");
    let out = verify(&["complex", "--type", "A", "--rank", "2", "--I0", "7"]);
    assert_eq!(out.status.code(), Some(2), "base index out of range");
}

#[test]
fn a_root_datum_file_drives_the_run() {
    let dir = scratch("datum");
    let path = dir.join("a1-unequal.json");
    fs::write(
        &path,
        r#"{ "cartan_type": "A1", "lattice_kind": "root", "lambda": 1, "lambda_star": 2 }"#,
    )
    .unwrap();
    let out = verify(&["kato-affine", "--datum", path.to_str().unwrap(), "--bound", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn the_all_subcommand_writes_one_file_per_suite() {
    let dir = scratch("out");
    let out = verify(&[
        "all",
        "--type",
        "A",
        "--rank",
        "2",
        "--bound",
        "2",
        "--out",
        dir.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    for suite in
        ["solomon", "hl-char", "kato-finite", "kato-affine", "hl-analogue", "complex"]
    {
        let payload = fs::read_to_string(dir.join(format!("{suite}.json"))).unwrap();
        let v: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert_eq!(v["suite"], suite);
        assert!(v["pass"].as_bool().unwrap(), "{suite} passes");
    }
    fs::remove_dir_all(&dir).unwrap();
}
