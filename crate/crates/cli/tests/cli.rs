use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn profend(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_profend"))
        .args(args)
        .env_remove("PROFEND_JOBS")
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn every_shipped_scenario_exits_zero() {
    for name in [
        "units_semidirect.pfg",
        "s3_negative_control.pfg",
        "splitthm_z4_z9.pfg",
        "lemmas.pfg",
        "regulation.pfg",
        "catalog_towers.pfg",
    ] {
        let o = profend(&["run", &scenario(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert!(!stdout(&o).contains("FAIL"), "{name}");
    }
}

#[test]
fn json_output_parses() {
    let o = profend(&[
        "run",
        &scenario("s3_negative_control.pfg"),
        "--format",
        "json",
        "--seed",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 9);
    let statuses: Vec<&str> = v["analyses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["status"].as_str().unwrap())
        .collect();
    assert!(statuses.contains(&"hypotheses_not_met"));
    assert!(v["analyses"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["ms"].is_null()));
}

#[test]
fn timings_fill_ms() {
    let o = profend(&[
        "run",
        &scenario("splitthm_z4_z9.pfg"),
        "--format",
        "json",
        "--timings",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["analyses"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["ms"].is_u64()));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = profend(&[
        "run",
        &scenario("splitthm_z4_z9.pfg"),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["scenario"], "splitthm on Z/4 x Z/9");
}

#[test]
fn malformed_scenario_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.pfg");
    fs::write(&path, "group G = cyclic(4)\nendo f on G = scale_first(\n").unwrap();
    let o = profend(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("2:"), "{err}");
    assert!(err.contains("error:"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn order_guard_flag_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.pfg");
    fs::write(&path, "group G = cyclic(100)\nanalyze o_pi(G, 2)\n").unwrap();
    let o = profend(&["run", path.to_str().unwrap(), "--order-guard", "50"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("order guard 50"), "{}", stderr(&o));
    let o = profend(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn missing_file_exits_two() {
    let o = profend(&["run", "/nonexistent/x.pfg"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn demo_is_deterministic() {
    let args = [
        "demo",
        "paper-example",
        "--p",
        "3",
        "--depth",
        "3",
        "--format",
        "json",
        "--seed",
        "4",
    ];
    let a = profend(&args);
    let b = profend(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(
        v["analyses"][0]["details"]["con"],
        serde_json::json!([3, 9, 27])
    );
}

#[test]
fn demo_text_has_three_rows() {
    let o = profend(&["demo", "paper-example", "--p", "2", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for kind in ["theorem_a", "theorem_b", "typef"] {
        assert!(
            text.lines().any(|l| l.contains(kind) && l.contains("PASS")),
            "{text}"
        );
    }
}

#[test]
fn jobs_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_profend"))
        .args(["run", &scenario("lemmas.pfg"), "--format", "json"])
        .env("PROFEND_JOBS", "3")
        .output()
        .unwrap();
    let reference = profend(&["run", &scenario("lemmas.pfg"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), stdout(&reference));
}

#[test]
fn selftest_prints_every_criterion() {
    let o = profend(&["selftest"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(
        text.lines().filter(|l| l.starts_with("criterion")).count(),
        10
    );
    assert!(text.ends_with("10 of 10 criteria passed\n"));
}
