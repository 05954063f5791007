use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn nc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nc-match"))
        .args(args)
        .env_remove("NC_MATCH_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn single_edge() {
    let out = nc(&["pm", "--oracle", "brute", path(&data("k2.dimacs"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["matching"], serde_json::json!([[1, 2]]));
    assert_eq!(v["mode"], "pm");
    assert_eq!(v["no_perfect_matching"], false);
    assert_eq!(v["stats"]["depth"], 1);
}

#[test]
fn decide_against_a_threshold() {
    let c4 = data("c4.dimacs");
    let answer = |w: &str| String::from_utf8(nc(&["decide", "-W", w, "--oracle", "brute", path(&c4)]).stdout).unwrap();
    assert_eq!(answer("3"), "no\n");
    assert_eq!(answer("4"), "yes\n");
    assert_eq!(answer("-1"), "no\n");
    let tri = String::from_utf8(nc(&["decide", "-W", "100", path(&data("triangle.dimacs"))]).stdout).unwrap();
    assert_eq!(tri, "no\n");
}

#[test]
fn minimum_weight_with_verification_and_duals() {
    let dir = tempfile::tempdir().unwrap();
    let duals = dir.path().join("duals.json");
    for oracle in ["brute", "exact", "tutte"] {
        let out = nc(&["mwpm", "--verify", "--dump-duals", path(&duals), "--oracle", oracle, path(&data("prism.dimacs"))]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["weight"], 1);
        assert_eq!(v["verify"]["valid"], true);
        let family: Value = serde_json::from_str(&std::fs::read_to_string(&duals).unwrap()).unwrap();
        assert_eq!(family["sets"], serde_json::json!([[1, 2, 3], [4, 5, 6]]));
    }
    let v = json(&nc(&["mwpm", "--oracle", "brute", path(&data("c4.dimacs"))]));
    assert_eq!(v["weight"], 4);
    assert_eq!(v["matching"], serde_json::json!([[1, 2], [3, 4]]));
}

#[test]
fn no_perfect_matching_exits_two() {
    let out = nc(&["mwpm", "--verify", path(&data("triangle.dimacs"))]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["no_perfect_matching"], true);
    assert_eq!(v["weight"], Value::Null);
    assert_eq!(v["matching"], serde_json::json!([]));
}

#[test]
fn maximum_matching() {
    let v = json(&nc(&["maxmatching", "--verify", path(&data("triangle.dimacs"))]));
    assert_eq!(v["size"], 1);
    assert_eq!(v["doubled_weight"], 1);
    let v = json(&nc(&["maxmatching", "--verify", path(&data("petersen.dimacs"))]));
    assert_eq!(v["size"], 5);
    assert_eq!(v["verify"]["valid"], true);
}

#[test]
fn malformed_input_reports_position() {
    let out = nc(&["mwpm", path(&data("bad_vertex.dimacs"))]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3, column 7"), "{err}");
}

#[test]
fn weight_cap_is_enforced() {
    let out = nc(&["mwpm", "--weight-cap", "3", path(&data("c4.dimacs"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("cap"));
}

#[test]
fn transcript_replay_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let o = dir.path().join("o.json");
    let first = nc(&["mwpm", "--oracle", "tutte", "--transcript-out", path(&t), path(&data("petersen.dimacs"))]);
    let second = nc(&["mwpm", "--replay", path(&t), "--out", path(&o), path(&data("petersen.dimacs"))]);
    assert_eq!(second.status.code(), Some(0));
    assert!(second.stdout.is_empty());
    let replayed: Value = serde_json::from_str(&std::fs::read_to_string(&o).unwrap()).unwrap();
    assert_eq!(json(&first)["matching"], replayed["matching"]);
    assert_eq!(replayed["oracle"], "replay");
    let other = nc(&["mwpm", "--replay", path(&t), path(&data("prism.dimacs"))]);
    assert_eq!(other.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |t: &str| json(&nc(&["mwpm", "--oracle", "exact", "--threads", t, path(&data("petersen.dimacs"))]))["matching"].clone();
    let one = run("1");
    assert_eq!(run("4"), one);
    assert_eq!(run("16"), one);
}

#[test]
fn seed_from_environment() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_nc-match"))
            .args(["mwpm", "--oracle", "tutte", path(&data("petersen.dimacs"))])
            .env("NC_MATCH_SEED", seed)
            .output()
            .unwrap();
        json(&out)["matching"].clone()
    };
    assert_eq!(run("1"), run("99"));
}

#[test]
fn lab_csv() {
    let out = nc(&["lab", "--family", "union", "--sizes", "12,20", "--samples", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[0].starts_with("family,seed,n,m,triads"));
    assert!(lines[1].starts_with("union,0,12,"));
    let single = String::from_utf8(nc(&["lab", path(&data("prism.dimacs"))]).stdout).unwrap();
    assert!(single.lines().nth(1).unwrap().starts_with("file,0,6,9,"));
}

#[test]
fn corpus_round_trips() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let p = entry.unwrap().path();
        let Ok((g, w)) = ncmatch::dimacs::parse(&std::fs::read_to_string(&p).unwrap()) else {
            continue;
        };
        let text = ncmatch::dimacs::serialize(&g, &w);
        let (g2, w2) = ncmatch::dimacs::parse(&text).unwrap();
        assert_eq!((g, w), (g2, w2), "{}", p.display());
    }
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_nc-match"))
        .args(["pm", "--oracle", "brute", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"p edge 4 3\ne 1 2\ne 2 3\ne 3 4\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(json(&out)["matching"], serde_json::json!([[1, 2], [3, 4]]));
}
