//! End-to-end tests of the command-line surface: output schemas, exit
//! codes, snapshot agreement and byte determinism.

use std::process::{Command, Output};

use parastab::qexp::{eta_delta, Closure, SiegelCoeffTable};
use parastab::scalars::QuadExtElem;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_parastab"));
    cmd.current_dir(workspace_root());
    cmd
}

fn workspace_root() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn parastab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn tables_match_snapshots_byte_for_byte() {
    for parahoric in ["borel", "siegel", "klingen"] {
        let out = run(&["tables", "--group", "gsp4", "--parahoric", parahoric]);
        assert!(out.status.success());
        let snapshot_path = workspace_root().join(format!("tables/gsp4_{parahoric}.json"));
        let expected = std::fs::read_to_string(&snapshot_path).expect("snapshot file");
        assert_eq!(stdout(&out), expected, "snapshot drift at {parahoric}");

        let check = run(&["tables", "--group", "gsp4", "--parahoric", parahoric, "--check"]);
        assert!(check.status.success());
    }
}

#[test]
fn tables_env_override_and_bad_group() {
    let out = bin()
        .args(["tables", "--group", "gsp4", "--parahoric", "siegel", "--check"])
        .env("PARASTAB_TABLES_DIR", "/nonexistent")
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(2), "missing snapshot dir is an I/O error");

    let out = run(&["tables", "--group", "gl2", "--parahoric", "borel"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eigenvalues_schema_matches_documented_shape() {
    let out = run(&["eigenvalues", "--case", "VIa", "--parahoric", "klingen"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(doc["tuples"], serde_json::json!([{"value": "gamma^2", "mult": 1}]));
    assert_eq!(doc["dim"], serde_json::json!(1));
    assert!(doc["schema"].is_string());
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["tables", "--group", "gsp4", "--parahoric", "borel"],
        vec!["eigenvalues", "--case", "I", "--parahoric", "borel"],
        vec![
            "stabilize",
            "--case",
            "IIb",
            "--parahoric",
            "siegel",
            "--target",
            "alpha",
        ],
        vec!["oracle-gl2", "--p", "3", "--x1", "2", "--x2", "5"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
    }
}

#[test]
fn output_json_reparses() {
    for args in [
        vec!["classify", "--case", "IIb"],
        vec!["eigenvalues", "--case", "Vd", "--parahoric", "klingen"],
        vec![
            "stabilize",
            "--case",
            "I",
            "--parahoric",
            "borel",
            "--target",
            "delta,gamma*delta",
        ],
        vec!["oracle-gl2", "--p", "2", "--x1", "3", "--x2", "1/3"],
        vec!["ordinary", "--p", "2", "--ap", "-24", "--k", "12", "--chi", "1"],
    ] {
        let out = run(&args);
        assert!(out.status.success(), "{args:?}: {:?}", out);
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
        assert!(doc["schema"].is_string(), "missing schema key in {args:?}");
    }
}

#[test]
fn stabilize_gl2_pipeline() {
    let dir = std::env::temp_dir().join("parastab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("delta200.json");
    let delta = eta_delta(200).unwrap();
    std::fs::write(&input, serde_json::to_string(&delta.to_repr()).unwrap()).unwrap();

    let out = run(&[
        "stabilize-gl2",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "11",
        "--choice",
        "alpha",
        "--truncate",
        "200",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(doc["level"], serde_json::json!(11));
    assert_eq!(doc["up_eigenform_ok"], serde_json::json!(true));
    assert_eq!(doc["up_eigenform_verified_range"], serde_json::json!(18));
    assert_eq!(doc["minpoly"]["t"], serde_json::json!("534612"));
    assert_eq!(doc["coefficients"][0], serde_json::json!("1"));

    // Empty coefficient file: parse error, exit 2.
    let empty = dir.join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let out = run(&[
        "stabilize-gl2",
        "--input",
        empty.to_str().unwrap(),
        "--p",
        "11",
        "--choice",
        "alpha",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Missing file: exit 2.
    let out = run(&[
        "stabilize-gl2",
        "--input",
        dir.join("nope.json").to_str().unwrap(),
        "--p",
        "11",
        "--choice",
        "alpha",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

fn synthetic_siegel_file(dir: &std::path::Path) -> std::path::PathBuf {
    let mut entries = std::collections::BTreeMap::new();
    entries.insert((1i64, 1i64, 1i64), QuadExtElem::from_int(1));
    entries.insert((2, 2, 2), QuadExtElem::from_int(1));
    entries.insert((4, 4, 4), QuadExtElem::from_int(1));
    let table = SiegelCoeffTable::new(2, QuadExtElem::from_int(1), entries, Closure::DeclaredZero);
    let path = dir.join("siegel.json");
    std::fs::write(&path, serde_json::to_string(&table.to_repr()).unwrap()).unwrap();
    path
}

#[test]
fn stabilize_sk_and_nonvanishing_pipeline() {
    let dir = std::env::temp_dir().join("parastab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let input = synthetic_siegel_file(&dir);

    let out = run(&[
        "stabilize-sk",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "2",
        "--choice",
        "alpha",
        "--ap",
        "1",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(doc["undefined"], serde_json::json!([]));
    assert!(doc["eigenvalues"].is_array());

    let out = run(&[
        "check-sk-nonvanishing",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "2",
        "--choice",
        "alpha",
        "--ap",
        "1",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(doc["nonvanishing"], serde_json::json!(true));
    assert_eq!(doc["witness"], serde_json::json!([1, 1, 1]));
}

#[test]
fn domain_and_usage_errors() {
    // Non-prime p is a domain error.
    let out = run(&["ordinary", "--p", "6", "--ap", "1", "--k", "2", "--chi", "1"]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown case is a domain error.
    let out = run(&["eigenvalues", "--case", "VIIa", "--parahoric", "borel"]);
    assert_eq!(out.status.code(), Some(1));
    // Unparseable rational is a parse error.
    let out = run(&["ordinary", "--p", "2", "--ap", "x", "--k", "2", "--chi", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown options are rejected by the parser.
    let out = run(&["tables", "--group", "gsp4", "--parahoric", "borel", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // Reducible U(2,1) input is a domain error, reported as not tabulated.
    let out = run(&["stabilize", "--case", "IIa", "--parahoric", "borel", "--target", "delta,gamma*delta"]);
    assert_eq!(out.status.code(), Some(1));
}
