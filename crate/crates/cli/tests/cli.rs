use std::fs;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn gtlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtlie")).args(args).env_remove("GTLIE_WORKERS").output().unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let o = gtlie(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn operations() {
    assert_eq!(json_out(&["bracket", "a", "b"]), json!({"terms": [{"class": "ab", "coeff": 1}]}));
    assert_eq!(json_out(&["bracket", "--surface", "g=0,n=3", "a", "b"]), json!({"terms": []}));
    assert_eq!(json_out(&["cobracket", "--sigma", "a+,b+,a-,b-", "aab"]), json!({"terms": []}));
    assert_eq!(json_out(&["selfint", "aabb"])["self_link_count"], 1);
    assert_eq!(json_out(&["intersect", "a", "ab"])["intersection_count"], 1);
    assert_eq!(json_out(&["simple", "--surface", "g=0,n=3", "aB"])["simple"], false);
    let d = json_out(&["cobracket", "aabAB"]);
    assert_eq!(d["terms"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_input_is_an_error() {
    for args in [
        &["bracket", "a", "aA"][..],
        &["cobracket", "--surface", "g=0,n=3", "c"],
        &["bracket", "--surface", "g=0,n=1", "a", "b"],
        &["simple", "--sigma", "a+,a+", "a"],
        &["selfint", "a1"],
    ] {
        let o = gtlie(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn check_prints_one_line_per_tuple() {
    let o = gtlie(&["check", "--identity", "antisym", "--max-len", "1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10 + 1);
    assert_eq!(lines[0], "PASS antisym a a");
    assert_eq!(*lines.last().unwrap(), "antisym: 10 passed, 0 failed on g=1,n=1 up to length 1");
}

#[test]
fn diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, v: Value| {
        let p = dir.path().join(name);
        fs::write(&p, v.to_string()).unwrap();
        p.to_str().unwrap().to_string()
    };
    let bracket = write(
        "bracket.json",
        json!({"involution": [1, 0, 3, 2], "vertices": [[0, 1, 2, 3]], "coloring": {"0": "out", "1": "in", "3": "in"}}),
    );
    assert_eq!(json_out(&["diagram", "validate", "--file", &bracket])["valid"], true);
    assert_eq!(json_out(&["diagram", "signature", "--file", &bracket]), json!({"g": 0, "k": 2, "l": 1, "chi": -1}));
    assert_eq!(json_out(&["diagram", "dim", "--file", &bracket])["dim"], 2);

    let bad = write(
        "bad.json",
        json!({"involution": [1, 0, 3, 2], "vertices": [[0, 1, 2, 3]], "coloring": {"0": "in", "1": "in", "3": "in"}}),
    );
    let o = gtlie(&["diagram", "validate", "--file", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violations"][0]["kind"], "monochrome_edge");

    let glue = write("glue.json", json!({"left": {"g": 0, "k": 1, "l": 2}, "right": {"g": 0, "k": 2, "l": 1}, "outputs": [1, 2], "inputs": [1, 2]}));
    let v = json_out(&["diagram", "glue", "--file", &glue]);
    assert_eq!(v["signature"], json!({"g": 1, "k": 1, "l": 1, "chi": -2}));
    assert_eq!(v["dim"], 5);

    let sig = write("s.json", json!({"g": 0, "k": 3, "l": 1}));
    let v = json_out(&["diagram", "compose", "--file", &sig]);
    assert!(v["terms"].as_array().unwrap().iter().any(|t| t["left"] == json!({"g": 0, "k": 2, "l": 1})
        && t["right"] == json!({"g": 0, "k": 2, "l": 1})));
}

#[test]
fn searches_write_reports_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let ckpt = dir.path().join("r.ckpt");
    let s = |p: &std::path::Path| p.to_str().unwrap().to_string();
    let summary = json_out(&[
        "search", "chas", "--n", "1", "--m", "-1", "--max-len", "5", "--out", &s(&out), "--csv", &s(&csv),
        "--checkpoint", &s(&ckpt), "--workers", "2",
    ]);
    assert_eq!(summary["totals"]["mismatches"], 0);
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["body"]["params"], json!({"n": 1, "m": -1, "theorem_backed": true}));
    assert_eq!(report["body_sha256"], summary["body_sha256"]);
    assert!(fs::read_to_string(&csv).unwrap().starts_with("class,length,primitive,simple,self_link,predicate_value\n"));

    // same body through a config file and the worker env var
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, json!({"surface": "g=1,n=1", "max_len": 5, "n": 1, "m": -1}).to_string()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gtlie"))
        .args(["search", "chas", "--config", &s(&cfg)])
        .env("GTLIE_WORKERS", "8")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["body_sha256"], summary["body_sha256"]);

    let v = json_out(&["search", "turaev", "--max-len", "2"]);
    assert_eq!(v["body"]["hits"], json!([]));
}

#[test]
fn sweep() {
    let v = json_out(&["sweep", "--surface", "g=0,n=3", "--max-len", "3", "--identities", "jacobi,involutive"]);
    assert_eq!(v["body"]["totals"]["defects"], 0);
    assert!(v["body"]["totals"]["jacobi_checked"].as_u64().unwrap() > 0);
    let v = json_out(&["sweep", "--max-len", "3", "--identities", ""]);
    assert_eq!(v["body"]["totals"], json!({"defects": 0}));
    let o = gtlie(&["sweep", "--max-len", "2", "--identities", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}
