use std::process::{Command, Output};

fn krl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krl")).args(args).env_remove("KRL_BUDGET").output().expect("run krl")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("krl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ring_ranks() {
    let o = krl(&["ring", "--n", "2", "--ranks"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["ranks"], serde_json::json!([1, 3, 2]));
}

#[test]
fn conjecture_and_mvss_pass() {
    let o = krl(&["conjecture", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["scans"].as_array().unwrap().iter().all(|s| s["counterexamples"].as_array().unwrap().is_empty()));
    let o = krl(&["mvss", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["exact"], serde_json::json!(true));
}

#[test]
fn graph_files() {
    let c2 = r#"{"vertices":[{"id":10,"parity":0},{"id":11,"parity":1},{"id":12,"parity":0},{"id":13,"parity":1}],
                 "edges":[[10,11],[11,12],[12,13],[13,10]]}"#;
    let p = tmp("c2.json");
    std::fs::write(&p, c2).unwrap();
    let o = krl(&["sgring", "--graph", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["ranks"], serde_json::json!([1, 3, 2]));

    for (name, text) in [
        ("odd.json", r#"{"vertices":[{"id":0,"parity":1},{"id":1,"parity":1}],"edges":[[0,1]]}"#),
        ("empty.json", r#"{"vertices":[],"edges":[]}"#),
        ("broken.json", "{"),
        ("split.json", r#"{"vertices":[{"id":0,"parity":0},{"id":1,"parity":1},{"id":2,"parity":0},{"id":3,"parity":1}],"edges":[[0,1],[2,3]]}"#),
    ] {
        let p = tmp(name);
        std::fs::write(&p, text).unwrap();
        let o = krl(&["sgring", "--graph", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(krl(&["sgring", "--graph", "/nonexistent/graph.json"]).status.code(), Some(2));
}

#[test]
fn budgets_and_usage_errors() {
    assert_eq!(krl(&["flags", "--n", "2", "--budget", "10"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_krl")).args(["flags", "--n", "2"]).env("KRL_BUDGET", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(krl(&["cohomology", "--n", "3"]).status.code(), Some(2));
    assert_eq!(krl(&["nope"]).status.code(), Some(2));
    assert_eq!(krl(&["flags", "--n", "1", "--q", "4"]).status.code(), Some(2));
    assert_eq!(krl(&["fold", "--n", "2", "--pinch", "4"]).status.code(), Some(2));
}

#[test]
fn deterministic_and_out_file() {
    let a = krl(&["flags", "--n", "2", "--lemmas", "--tree", "--seed", "3"]);
    let b = krl(&["flags", "--n", "2", "--lemmas", "--tree", "--seed", "3", "--jobs", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let p = tmp("ncm.csv");
    let o = krl(&["ncm", "--n", "3", "--format", "csv", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(text.lines().count(), 1 + 5);
    let r1 = krl(&["ring", "--n", "3", "--random-checks", "50", "--seed", "9"]);
    let r2 = krl(&["ring", "--n", "3", "--random-checks", "50", "--seed", "9"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn topology_and_folds() {
    let o = krl(&["cohomology", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "match");
    let o = krl(&["fold", "--n", "4"]);
    assert_eq!(json(&o)["count"], 14);
    let o = krl(&["fold", "--n", "3", "--pinch", "1,3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = krl(&["sparse", "--n", "4", "--gf"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["total"], 70);
}
