use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn aitgl(args: &[&str], trace_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aitgl"))
        .args(args)
        .env("AITGL_TRACE_DIR", trace_dir)
        .output()
        .expect("binary runs")
}

fn lines(path: &Path) -> Vec<Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn summary(path: &Path) -> Value {
    lines(path).pop().unwrap()["summary"].clone()
}

#[test]
fn enumerate_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = aitgl(
        &[
            "enumerate",
            "--k",
            "2",
            "--budget",
            "10000",
            "--max-len",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&dir.path().join("enumerate.jsonl"));
    assert_eq!(s["count"], 7);
    assert_eq!(s["width"], 2);
    assert_eq!(
        s["members"],
        serde_json::json!(["", "0", "1", "00", "11", "000", "111"])
    );
    assert_eq!(lines(&dir.path().join("enumerate.jsonl")).len(), 8);
}

#[test]
fn trim_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = aitgl(
        &[
            "trim",
            "--from-machine",
            "2",
            "--w",
            "2",
            "--depth",
            "3",
            "--horizon",
            "10000",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&dir.path().join("trim.jsonl"));
    assert_eq!(
        s["result"],
        serde_json::json!(["", "0", "1", "00", "11", "000", "111"])
    );
    assert_eq!(s["leafless"], true);
    assert!(String::from_utf8_lossy(&out.stdout).contains("T = {Λ, 0, 1, 00, 11, 000, 111}"));
}

#[test]
fn trim_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.json");
    std::fs::write(
        &input,
        r#"[{"s":"","len":0},{"s":"0","len":1},{"s":"01","len":2}]"#,
    )
    .unwrap();
    let out = aitgl(
        &[
            "trim",
            "--from-file",
            input.to_str().unwrap(),
            "--w",
            "1",
            "--depth",
            "3",
            "--horizon",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&dir.path().join("trim.jsonl"));
    assert_eq!(s["result"], serde_json::json!(["", "0", "01", "010"]));
}

#[test]
fn play_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = aitgl(
        &["play", "--w", "1", "--bob", "copycat", "--horizon", "10"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let trace = lines(&dir.path().join("play.jsonl"));
    assert_eq!(trace.len(), 11);
    assert_eq!(trace[0]["coincidence"], Value::Null);
    assert_eq!(trace[1]["coincidence"], 0);
    let s = &trace[10]["summary"];
    assert_eq!(
        s["first_coincidence"],
        serde_json::json!({"ply": 2, "len": 0})
    );
    assert_eq!(s["violation"], Value::Null);
}

#[test]
fn scripted_bob_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("bob.txt");
    std::fs::write(&script, "# hit the root, then pass\ne\npass\n1\n").unwrap();
    let spec = format!("file:{}", script.display());
    let out = aitgl(
        &["play", "--w", "2", "--bob", &spec, "--horizon", "6"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let trace = lines(&dir.path().join("play.jsonl"));
    assert_eq!(trace[1]["string"], "");
    assert_eq!(trace[3]["move"], "pass");
    assert_eq!(trace[5]["string"], "1");
}

#[test]
fn tokens_replay() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("set.json");
    std::fs::write(
        &input,
        r#"[{"s":"0","len":1},{"s":"00","len":2},{"s":"01","len":2}]"#,
    )
    .unwrap();
    let path = input.to_str().unwrap();
    let out = aitgl(&["tokens", "--input", path, "--order", "file"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let trace = lines(&dir.path().join("tokens.jsonl"));
    let events: Vec<&str> = trace[..3]
        .iter()
        .map(|r| r["event"].as_str().unwrap())
        .collect();
    assert_eq!(events, ["placed", "moved", "placed"]);
    assert_eq!(trace[3]["summary"]["bijective"], true);

    // Two incomparable depth-2 strings cannot share one token.
    let out = aitgl(&["tokens", "--input", path, "--w", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("capacity") && err.contains("step 3"), "{err}");
}

#[test]
fn estimate_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = aitgl(
        &["estimate", "--seq", "alt", "--mode", "M", "--n-hi", "8"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&dir.path().join("estimate.jsonl"));
    assert_eq!(s["value"], 4);
    assert_eq!(s["witness"], "0001");
    assert_eq!(s["direction"], "upper_bound");
}

#[test]
fn usage_errors_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["play", "--w", "17", "--bob", "pass", "--horizon", "10"][..],
        &[
            "trim",
            "--w",
            "2",
            "--depth",
            "25",
            "--horizon",
            "10",
            "--from-machine",
            "2",
        ],
        &["play", "--w", "2", "--bob", "blind:99", "--horizon", "10"],
        &[
            "estimate", "--seq", "alt", "--mode", "Minf-seq", "--n-lo", "9", "--n-hi", "3",
        ],
        &["trim", "--w", "2", "--depth", "3", "--horizon", "10"],
    ] {
        let out = aitgl(args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("--"),
            "{args:?}"
        );
    }
    let out = aitgl(&["tokens", "--input", "/nonexistent/set.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(aitgl(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn trace_dir_overrides_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = aitgl(
        &[
            "play",
            "--w",
            "1",
            "--bob",
            "pass",
            "--horizon",
            "4",
            "--out",
            "nested/mine.jsonl",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("mine.jsonl").exists());
    assert!(!Path::new("nested/mine.jsonl").exists());
}
