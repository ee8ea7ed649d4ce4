use std::path::Path;
use std::process::{Command, Output};

fn degrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn monomial_report_on_stdout() {
    let out = degrowth(&[
        "analyze-monomial",
        "-A",
        "2,1,1,1",
        "-n",
        "8",
        "--depth",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["schema"], "v1");
    let degs: Vec<u64> = serde_json::from_value(r["degrees"].clone()).unwrap();
    assert_eq!(degs, [3, 8, 21, 55, 144, 377, 987, 2584]);
    let l1 = r["lambda1"]["value"].as_f64().unwrap();
    assert!((l1 - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    assert_eq!(r["lambda2"]["value"].as_f64(), Some(1.0));
    assert_eq!(r["fit"]["hypothesis_ok"], true);
    assert_eq!(r["partial"], false);
}

#[test]
fn negative_entries_are_accepted() {
    let out = degrowth(&[
        "analyze-monomial",
        "-A",
        "-1,0,0,-1",
        "-n",
        "6",
        "--depth",
        "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let degs: Vec<u64> = serde_json::from_value(json(&out)["degrees"].clone()).unwrap();
    assert_eq!(degs, [2, 1, 2, 1, 2, 1]);
}

#[test]
fn equality_case_reports_divergence() {
    let out = degrowth(&[
        "analyze-monomial",
        "-A",
        "2,0,2,2",
        "-n",
        "8",
        "--depth",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["fit"]["hypothesis_ok"], false);
    assert!(r["fit"].get("b").is_none());
    assert_eq!(r["fit"]["divergence"]["growth"], "linear");
}

#[test]
fn ratmap_with_fiber_count() {
    let out = degrowth(&[
        "analyze-ratmap",
        "--map",
        &corpus("henon.json"),
        "-n",
        "6",
        "--topdeg",
        "fiber",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["config"]["map_file"], "henon.json");
    assert_eq!(r["lambda2"]["value"].as_f64(), Some(1.0));
    assert_eq!(r["lambda2"]["provenance"], "heuristic");
    assert_eq!(r["stability"]["first_unstable"], serde_json::Value::Null);
}

#[test]
fn recurrence_and_fit_commands() {
    let out = degrowth(&["recurrence", "--degrees", "3,8,21,55,144,377"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["recurrence"]["coeffs"], serde_json::json!(["3", "-1"]));
    assert_eq!(r["recurrence"]["predicted_next"], "987");

    let out = degrowth(&[
        "fit",
        "--degrees",
        "3,8,21,55,144,377,987,2584",
        "--lambda2",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let b = json(&out)["fit"]["b"].as_f64().unwrap();
    assert!((b - 1.170820).abs() < 1e-3);
}

#[test]
fn invalid_input_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"components\": [\"X^2\", \"Y^2\"").unwrap();
    for args in [
        vec!["analyze-ratmap", "--map", bad.to_str().unwrap()],
        vec!["analyze-monomial", "-A", "1,2,2,4"],
        vec!["analyze-monomial", "-A", "1,2,3"],
        vec!["fit", "--degrees", "1,2,3", "--lambda2", "1"],
        vec!["no-such-command"],
    ] {
        let out = degrowth(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn capacity_exit_writes_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = degrowth(&[
        "analyze-ratmap",
        "--map",
        &corpus("quadratic.json"),
        "-n",
        "8",
        "--cap",
        "50",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["partial"], true);
    assert!(!report["degrees"].as_array().unwrap().is_empty());
}

#[test]
fn csv_files_carry_schema_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = degrowth(&[
        "analyze-monomial",
        "-A",
        "2,1,1,1",
        "-n",
        "8",
        "--depth",
        "1",
        "--seed",
        "9",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let degrees = std::fs::read_to_string(dir.path().join("degrees.csv")).unwrap();
    let lines: Vec<&str> = degrees.lines().collect();
    assert_eq!(lines[0], "# schema=v1 seed=9");
    assert_eq!(lines[1], "n,deg");
    assert_eq!(lines[2], "1,3");
    assert_eq!(lines.len(), 10);
    let residuals = std::fs::read_to_string(dir.path().join("residuals.csv")).unwrap();
    assert_eq!(
        residuals.lines().nth(1),
        Some("n,deg,b_lambda1_n,residual,lambda2_half_n")
    );
    assert_eq!(residuals.lines().count(), 10);
}
