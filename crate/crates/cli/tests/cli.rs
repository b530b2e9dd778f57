use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn unitals(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitals")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen(dir: &TempDir, file: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(file);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = unitals(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let pg4 = gen(&dir, "pg4.txt", &["plane", "4"]);
    assert_eq!(unitals(&["validate", s(&pg4), "--base", "0"]).status.code(), Some(0));

    let text = fs::read_to_string(&pg4).unwrap();
    let mut rows: Vec<String> = text.lines().map(String::from).collect();
    let first: Vec<&str> = rows[0].split(' ').collect();
    // swap one label of the first line for a point it does not contain
    let outsider = (0..21).map(|x| x.to_string()).find(|x| !first.contains(&x.as_str())).unwrap();
    rows[0] = format!("{} {}", outsider, first[1..].join(" "));
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, rows.join("\n") + "\n").unwrap();
    let o = unitals(&["validate", s(&bad), "--base", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("pair"), "{}", stdout(&o));

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    assert_eq!(unitals(&["validate", s(&empty), "--base", "0"]).status.code(), Some(2));
    assert_eq!(unitals(&["validate", s(&pg4)]).status.code(), Some(2), "text needs --base");
    assert_eq!(unitals(&["validate", s(&pg4), "--base", "2"]).status.code(), Some(2));
    assert_eq!(unitals(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn wrong_base_is_reported() {
    let dir = TempDir::new().unwrap();
    let fano = gen(&dir, "fano.txt", &["plane", "2", "--base", "1"]);
    assert_eq!(unitals(&["validate", s(&fano), "--base", "1"]).status.code(), Some(0));
    let o = unitals(&["validate", s(&fano), "--base", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("label 7"));
}

#[test]
fn aut_reports_fano_group() {
    let dir = TempDir::new().unwrap();
    let fano = gen(&dir, "fano.json", &["plane", "2", "--format", "json"]);
    let o = unitals(&["aut", s(&fano), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["group_order"], "168");
    assert_eq!(v["orbit_count"], 1);
}

#[test]
fn aut_rejects_a_non_plane() {
    let dir = TempDir::new().unwrap();
    // seven lines of three points that do not form a plane
    let f = dir.path().join("graph.txt");
    fs::write(&f, "0 1 2\n0 1 2\n0 1 2\n3 4 5\n3 4 5\n3 4 5\n6 0 3\n").unwrap();
    assert_eq!(unitals(&["aut", s(&f), "--base", "0"]).status.code(), Some(1));
}

#[test]
fn gen_sizes() {
    let o = unitals(&["gen", "host", "5"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 651);
    assert!(text.lines().all(|l| l.split_whitespace().count() == 26));
    let o = unitals(&["gen", "plane", "7"]);
    assert_eq!(stdout(&o).lines().count(), 57);
    let o = unitals(&["gen", "hermitian", "2"]);
    assert_eq!(stdout(&o).split_whitespace().count(), 9);
    assert_eq!(unitals(&["gen", "plane", "6"]).status.code(), Some(2));
}

#[test]
fn verify_hermitian_q5_and_a_broken_copy() {
    let dir = TempDir::new().unwrap();
    let plane = gen(&dir, "pg25.txt", &["host", "5", "--base", "1"]);
    let h = gen(&dir, "h5.txt", &["hermitian", "5", "--base", "1"]);
    let o = unitals(&["verify", s(&plane), s(&h), "--base", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("6: 525 lines"));

    let labels = fs::read_to_string(&h).unwrap();
    let fewer: Vec<&str> = labels.split_whitespace().skip(1).collect();
    let broken = dir.path().join("broken.txt");
    fs::write(&broken, fewer.join(" ")).unwrap();
    let o = unitals(&["verify", s(&plane), s(&broken), "--base", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("points: 125"));
    assert!(stdout(&o).contains("  0: "), "{}", stdout(&o));

    // labels in the other base
    let h0 = gen(&dir, "h5_0.txt", &["hermitian", "5", "--base", "0"]);
    let o = unitals(&["verify", s(&plane), s(&h0), "--base", "1", "--labels-base", "0"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn find_writes_results_and_classify_reads_them() {
    let dir = TempDir::new().unwrap();
    let pg4 = gen(&dir, "pg4.txt", &["host", "2"]);
    let out = dir.path().join("results");
    fs::create_dir(&out).unwrap();
    let o = unitals(&["find", s(&pg4), "--base", "0", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("ORDER OF THE UNITAL AUTOMORPHISM GROUP=          432"));
    assert!(out.join("pg4.unitals.json").exists());

    // the same plane under another name is a second, isomorphic source
    let copy = dir.path().join("copy.txt");
    fs::copy(&pg4, &copy).unwrap();
    assert_eq!(unitals(&["find", s(&copy), "--base", "0", "--out", s(&out)]).status.code(), Some(0));
    let o = unitals(&["classify", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("isomorphism classes: 1"), "{text}");
    assert!(text.contains("copy#1 pg4#1"), "{text}");
    assert!(text.contains("spanning more than one plane: 1"));
}

#[test]
fn classify_empty_directory() {
    let dir = TempDir::new().unwrap();
    let o = unitals(&["classify", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("isomorphism classes: 0"));
    assert_eq!(unitals(&["classify", s(&dir.path().join("missing"))]).status.code(), Some(2));
}

#[test]
fn tiny_budget_is_a_flagged_success() {
    let dir = TempDir::new().unwrap();
    let pg9 = gen(&dir, "pg9.txt", &["host", "3"]);
    let o = unitals(&["find", s(&pg9), "--base", "0", "--nodes", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["budget_hit"], true);
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget exhausted"));
}

#[test]
fn find_rejects_bad_settings() {
    let dir = TempDir::new().unwrap();
    let pg4 = gen(&dir, "pg4.txt", &["host", "2"]);
    assert_eq!(unitals(&["find", s(&pg4), "--base", "0", "--q", "3"]).status.code(), Some(2));
    assert_eq!(unitals(&["find", s(&pg4), "--base", "0", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(unitals(&["find", s(&pg4), "--base", "0", "--orders", "2,x"]).status.code(), Some(2));
    let fano = gen(&dir, "fano.txt", &["plane", "2"]);
    assert_eq!(unitals(&["find", s(&fano), "--base", "0"]).status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let pg4 = gen(&dir, "pg4.txt", &["host", "2"]);
    let cfg = dir.path().join("search.toml");
    fs::write(&cfg, "seed = 99\norders = [3]\nnode_budget = 1000\n").unwrap();
    let o = unitals(&["find", s(&pg4), "--base", "0", "--config", s(&cfg), "--seed", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 5);
    assert!(v["families"].as_array().unwrap().iter().all(|f| f["label"].as_str().unwrap().contains("order 3")));

    fs::write(&cfg, "sede = 1\n").unwrap();
    assert_eq!(unitals(&["find", s(&pg4), "--base", "0", "--config", s(&cfg)]).status.code(), Some(2));
}
