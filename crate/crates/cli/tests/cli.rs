use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ckbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckbound"))
        .args(args)
        .output()
        .expect("run ckbound")
}

fn request(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "requests", name]
        .iter()
        .collect();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_thrice_punctured_line() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = ckbound(&[
        "analyze",
        &request("thrice_punctured_line.json"),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("floor=135"));
    assert!(text.contains("floor=180"));

    let raw = fs::read_to_string(&json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(v["bounds"]["refined"]["bound"]["total_bound_floor"], 135);
    assert_eq!(v["bounds"]["generic"]["reduction"]["total"], 4);
    for k in ["alpha1", "alpha2", "beta", "gamma", "delta"] {
        assert_eq!(v["criteria"]["selmer"][k], 1);
    }
    // Keys come out sorted.
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn analyze_json_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = ckbound(&[
            "analyze",
            &request("even_hyperelliptic.json"),
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn analyze_superelliptic_bd() {
    let out = ckbound(&["analyze", &request("superelliptic_x5_plus_1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("#Y(F_7) = 7"));
    assert!(text.contains("alpha2'             1  yes"));
    assert!(text.contains("r_p not supplied"));
}

#[test]
fn flag_overrides() {
    let out = ckbound(&[
        "analyze",
        &request("thrice_punctured_line.json"),
        "--p",
        "5",
        "--S",
        "2,3",
        "--reduction-mode",
        "generic",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("S = {2, 3}  p = 5"));
    assert!(text.contains("NOT JUSTIFIED"));
    assert!(!text.contains("bound (refined)"));

    let out = ckbound(&[
        "analyze",
        &request("even_hyperelliptic.json"),
        "--nl",
        "5=3",
        "--reduction-mode",
        "generic",
        "--variant",
        "selmer",
        "--hbk",
        "1",
        "--quotient",
        "w2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // (n_5 + n) * n_3 = (3 + 2) * 2
    assert!(text.contains("types=10"));
    assert!(text.contains("h_BK=1"));
    assert!(text.contains("w2 "));
    assert!(!text.contains("abat "));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = ckbound(&[
        "analyze",
        &request("superelliptic_x5_plus_1.json"),
        "--p",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DividesDiscriminant"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"curve": {"family": "superelliptic", "m": 2, "f": [0, 0, 1, 1]}, "arithmetic": {"r": 1, "rho": 1}, "p": 7}"#).unwrap();
    let out = ckbound(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("squarefree"));

    let inconsistent = dir.path().join("neg.json");
    fs::write(
        &inconsistent,
        r#"{"curve": {"family": "generic", "g": 1, "n": 1, "n1": 1, "n2": 0, "d_closed": 1},
            "arithmetic": {"r": 2, "r_p": 1, "rho": 1}, "p": 3, "y_count": 4}"#,
    )
    .unwrap();
    assert_eq!(
        ckbound(&["analyze", inconsistent.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );

    assert_eq!(
        ckbound(&["analyze", "/nonexistent.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ckbound(&[
            "analyze",
            &request("thrice_punctured_line.json"),
            "--nl",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        ckbound(&[
            "analyze",
            &request("thrice_punctured_line.json"),
            "--quotient",
            "xyz"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn examples_pass() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("rows.json");
    let out = ckbound(&["examples", "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("thrice-punctured line"));
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r["passed"] == true));
}

#[test]
fn pointcount_subcommand() {
    let out = ckbound(&[
        "pointcount",
        &request("thrice_punctured_line.json"),
        "--p",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("#Y(F_11) = 9"));

    let out = ckbound(&[
        "pointcount",
        &request("superelliptic_x5_plus_1.json"),
        "--p",
        "7",
    ]);
    assert!(stdout(&out).contains("#Y(F_7) = 7"));

    let out = ckbound(&[
        "pointcount",
        &request("superelliptic_x5_plus_1.json"),
        "--p",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn series_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let w2 = dir.path().join("w2.json");
    // g = 2, n = 1: weight -1 local 2, weight -2 local 5 + 0.
    fs::write(
        &w2,
        r#"{"kind": "FullWeightTwo", "pieces": [
            {"weight": -1, "dim_global": 2, "dim_local": 2, "label": "V"},
            {"weight": -2, "dim_global": 2, "dim_local": 5, "label": "W"}]}"#,
    )
    .unwrap();
    let out = ckbound(&["series", w2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("local: [1, 2, 8]"));

    let zero = dir.path().join("zero.json");
    fs::write(
        &zero,
        r#"{"kind": "Abelianized", "pieces": [
            {"weight": -1, "dim_global": 0, "dim_local": 0, "label": "V"},
            {"weight": -2, "dim_global": 0, "dim_local": 0, "label": "W"}]}"#,
    )
    .unwrap();
    let out = ckbound(&["series", zero.to_str().unwrap(), "--s", "1"]);
    assert!(stdout(&out).contains("global (s=1): [1, 0, 1]"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"kind": "Abelianized", "pieces": []}"#).unwrap();
    assert_eq!(
        ckbound(&["series", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
}
