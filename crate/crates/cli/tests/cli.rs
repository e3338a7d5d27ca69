use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alt-schur"))
        .args(args)
        .env_remove("ALT_SCHUR_CACHE_DIR")
        .env_remove("ALT_SCHUR_MAX_CONFIGS")
        .env_remove("ALT_SCHUR_MAX_BASIS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn enumerate_counts() {
    for (args, count) in [
        (["enumerate", "2", "2", "--kind", "N"], 6),
        (["enumerate", "1", "2", "--kind", "N"], 0),
        (["enumerate", "2", "2", "--kind", "Lambda"], 3),
        (["enumerate", "2", "2", "--kind", "M"], 10),
    ] {
        let mut a = vec!["--json"];
        a.extend(args);
        let v = stdout_json(&run(&a));
        assert_eq!(v["count"], count, "{args:?}");
        assert_eq!(v["items"].as_array().unwrap().len(), count);
    }
    let text = run(&["enumerate", "2", "2", "--kind", "N"]);
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("6 graphs"));
}

#[test]
fn multiply_worked_example_and_identity() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(
        dir.path(),
        "x.json",
        r#"{"n":2,"d":4,"field":"Q","terms":[{"parity":"even","adj":[[2,0],[1,1]],"coeff":"1"}]}"#,
    );
    let y = write(
        dir.path(),
        "y.json",
        r#"{"n":2,"d":4,"field":"Q","terms":[{"parity":"even","adj":[[2,1],[0,1]],"coeff":"1"}]}"#,
    );
    let p = stdout_json(&run(&["multiply", &x, &y]));
    let mut terms: Vec<(String, String)> = p["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["adj"].to_string(), t["coeff"].as_str().unwrap().to_string()))
        .collect();
    terms.sort();
    assert_eq!(
        terms,
        vec![
            ("[[2,1],[1,0]]".to_string(), "1/1".to_string()),
            ("[[3,0],[0,1]]".to_string(), "3/1".to_string()),
        ]
    );

    let one = run(&["identity", "2", "4"]);
    let one_path = dir.path().join("one.json");
    fs::write(&one_path, &one.stdout).unwrap();
    let xi = stdout_json(&run(&["multiply", &x, one_path.to_str().unwrap()]));
    let x_back = stdout_json(&run(&["multiply", one_path.to_str().unwrap(), &x]));
    assert_eq!(xi, x_back);
    assert_eq!(xi["terms"][0]["adj"].to_string(), "[[2,0],[1,1]]");
    assert_eq!(xi["terms"].as_array().unwrap().len(), 1);
}

#[test]
fn multiply_errors_have_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(
        dir.path(),
        "x.json",
        r#"{"n":2,"d":4,"field":"Q","terms":[{"parity":"even","adj":[[2,0],[1,1]],"coeff":"1"}]}"#,
    );
    let y = write(
        dir.path(),
        "y.json",
        r#"{"n":2,"d":3,"field":"Q","terms":[{"parity":"even","adj":[[2,0],[1,0]],"coeff":"1"}]}"#,
    );
    assert_eq!(run(&["multiply", &x, &y]).status.code(), Some(2));
    let z = write(
        dir.path(),
        "z.json",
        r#"{"n":2,"d":4,"field":"GF(5)","terms":[]}"#,
    );
    assert_eq!(run(&["multiply", &x, &z]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(run(&["multiply", &x, &bad]).status.code(), Some(4));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["multiply", &x, missing.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn table_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cache");
    let out = out.to_str().unwrap();
    let first = run(&["--json", "table", "2", "2", "--out", out]);
    let v = stdout_json(&first);
    assert_eq!(v["even_dim"].as_u64().unwrap() + v["odd_dim"].as_u64().unwrap(), 16);
    assert!(dir.path().join("cache/table_n2_d2.json").exists());
    assert!(String::from_utf8_lossy(&first.stderr).contains("wrote"));
    let second = run(&["--json", "table", "2", "2", "--out", out]);
    assert!(String::from_utf8_lossy(&second.stderr).contains("loaded"));
    assert_eq!(first.stdout, second.stdout);

    let big = stdout_json(&run(&["--json", "table", "2", "10", "--out", out]));
    assert_eq!(big["odd_dim"], 0);
    for key in ["eo", "oe", "oo"] {
        assert_eq!(big["nonzero"][key], 0);
    }
}

#[test]
fn sweep_frontier() {
    let v = stdout_json(&run(&["--json", "sweep", "--n-max", "3", "--d-max", "3"]));
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    for c in cells {
        let (n, d) = (c["n"].as_u64().unwrap(), c["d"].as_u64().unwrap());
        assert_eq!(c["psi"]["iso"], n >= d, "({n},{d})");
        if (n, d) == (1, 1) {
            assert_eq!(c["phi"]["iso"], true);
        }
    }
    let text = run(&["sweep", "--n-max", "2", "--d-max", "4"]);
    let text = String::from_utf8_lossy(&text.stdout);
    assert!(text.contains("(2,4): ξ of"));
}

#[test]
fn sweep_marks_cells_over_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_alt-schur"))
        .args(["--json", "sweep", "--n-max", "2", "--d-max", "3"])
        .env("ALT_SCHUR_MAX_BASIS", "20")
        .output()
        .unwrap();
    let v = stdout_json(&out);
    let skipped = v["cells"].as_array().unwrap().iter().filter(|c| c.get("skipped").is_some()).count();
    assert_eq!(skipped, 1);
}

#[test]
fn verify_passes_and_refuses() {
    let ok = run(&["--json", "verify", "2", "2"]);
    let v = stdout_json(&ok);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 6);
    let ok5 = run(&["verify", "2", "3", "--field", "GF(5)"]);
    assert_eq!(ok5.status.code(), Some(0));
    let refused = run(&["verify", "2", "20"]);
    assert_eq!(refused.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("budget"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["--json", "sweep", "--n-max", "2", "--d-max", "2"]);
    let b = run(&["--json", "sweep", "--n-max", "2", "--d-max", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn matrix_csv() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(
        dir.path(),
        "z.json",
        r#"{"n":2,"d":2,"field":"Q","terms":[{"parity":"odd","adj":[[0,1],[1,0]],"coeff":"1"}]}"#,
    );
    let out = run(&["matrix", &x]);
    assert!(out.status.success());
    let csv = String::from_utf8_lossy(&out.stdout);
    assert_eq!(csv.lines().count(), 4);
}
