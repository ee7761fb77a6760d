use std::process::Command;

use serde_json::Value;
use zkamp_cli::report::ANCHORS;

fn zkamp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_zkamp"))
        .args(args)
        .env_remove("ZKAMP_SEED")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn without_timings(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).unwrap();
    v["environment"]["timings"] = Value::Null;
    v
}

#[test]
fn zk_check_example() {
    let (code, out, _) = zkamp(&[
        "zk-check", "--n", "3", "--g0", "01,12", "--g1", "01,02", "--trials", "5", "--seed", "7",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let distances: Vec<f64> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["check"].as_str().unwrap().starts_with("trace-distance"))
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    assert_eq!(distances.len(), 5);
    assert!(distances.iter().all(|&d| d <= 1e-10));
    assert_eq!(v["pass"], Value::Bool(true));
}

#[test]
fn verify_eq1_example() {
    let (code, out, _) = zkamp(&[
        "verify-eq1",
        "--n",
        "2",
        "--g0",
        "01",
        "--g1",
        "01",
        "--trials",
        "1",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["records"][0]["value"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["zk-check", "--n", "3", "--g0", "01,12", "--g1", "01,02,12"][..],
        &["zk-check", "--n", "5"],
        &["verify-eq1", "--g0", "0x"],
        &["verify-eq1", "--g0", "01,13", "--n", "3"],
        &["schedule", "--m", "1"],
        &["watrous", "--trials", "0"],
    ] {
        let (code, out, err) = zkamp(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(out.is_empty());
        assert!(err.contains("configuration error"), "{err}");
    }
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["verify-eq2", "zk-check", "watrous", "blocks", "phases", "schedule"] {
        let args = [cmd, "--trials", "3", "--seed", "11", "--m", "4"];
        let (c1, a, _) = zkamp(&args);
        let (c2, b, _) = zkamp(&args);
        assert_eq!((c1, c2), (0, 0), "{cmd}");
        assert_eq!(without_timings(&a), without_timings(&b), "{cmd}");
        let text = |s: &str| s.split("\"environment\"").next().unwrap().to_string();
        assert_eq!(text(&a), text(&b), "{cmd}");
    }
}

#[test]
fn environment_seed_overrides_flag() {
    let run = |env: Option<&str>, seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_zkamp"));
        c.args(["zk-check", "--trials", "1", "--seed", seed]);
        match env {
            Some(e) => c.env("ZKAMP_SEED", e),
            None => c.env_remove("ZKAMP_SEED"),
        };
        without_timings(&String::from_utf8(c.output().unwrap().stdout).unwrap())
    };
    let with_env = run(Some("5"), "9");
    assert_eq!(with_env["environment"]["seed"], Value::from(5));
    assert_eq!(with_env, run(None, "5"));
    assert_ne!(with_env, run(None, "9"));
}

#[test]
fn anchors_come_from_the_catalogue() {
    for cmd in [
        "verify-eq1",
        "verify-eq2",
        "zk-check",
        "watrous",
        "blocks",
        "phases",
        "schedule",
    ] {
        let (_, out, _) = zkamp(&[cmd, "--trials", "1"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        for r in v["records"].as_array().unwrap() {
            let a = r["anchor"].as_str().unwrap();
            assert!(ANCHORS.contains(&a), "{cmd}: {a}");
        }
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("zkamp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let (code, out, _) = zkamp(&["schedule", "--m", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "schedule");
    std::fs::remove_dir_all(&dir).unwrap();
}
