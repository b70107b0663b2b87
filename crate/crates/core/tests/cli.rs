//! End-to-end runs of the `turnsolve` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn turnsolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turnsolve")).args(args).env_remove("TURNSOLVE_THREADS").output().unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn meta<'a>(solution: &'a str, key: &str) -> Option<&'a str> {
    solution.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(' '))
}

#[test]
fn domino_both_modes_agree() {
    let dir = TempDir::new().unwrap();
    let sol = path(&dir, "domino.sol");
    let out = turnsolve(&["solve", &fixture("domino.txt"), "--mode", "both", "--goal", "cover", "--out", &sol]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&sol).unwrap();
    assert_eq!(meta(&text, "cost"), Some("4"));
    assert_eq!(meta(&text, "valid"), Some("true"));
    assert_eq!(meta(&text, "ratio").map(|r| r.parse::<f64>().unwrap()), Some(1.0));

    let check = turnsolve(&["validate", &fixture("domino.txt"), &sol]);
    assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stderr));
}

#[test]
fn oversized_exact_solve_hits_limit() {
    let out = turnsolve(&["solve", &fixture("office_40.txt"), "--mode", "exact", "--max-pixels", "20"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn svg_has_a_square_per_pixel_and_a_path_per_cycle() {
    let dir = TempDir::new().unwrap();
    let (sol, svg) = (path(&dir, "comb.sol"), path(&dir, "comb.svg"));
    let out = turnsolve(&["solve", &fixture("comb.txt"), "--goal", "cover", "--out", &sol, "--svg", &svg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let picture = fs::read_to_string(&svg).unwrap();
    let cycles = fs::read_to_string(&sol).unwrap().lines().filter(|l| l.starts_with("cycle ")).count();
    assert!(cycles > 0);
    assert_eq!(picture.matches("<rect").count(), 19);
    assert_eq!(picture.matches("<path").count(), cycles);
}

#[test]
fn broken_solution_is_rejected() {
    let dir = TempDir::new().unwrap();
    let sol = path(&dir, "l.sol");
    assert!(turnsolve(&["solve", &fixture("l_tromino.txt"), "--goal", "tour", "--out", &sol]).status.success());
    let text = fs::read_to_string(&sol).unwrap();
    // Drop the first cycle, leaving pixels uncovered.
    let mut dropped = false;
    let broken: String = text
        .lines()
        .filter(|l| !(l.starts_with("cycle ") && !std::mem::replace(&mut dropped, true)))
        .map(|l| format!("{l}\n"))
        .collect();
    assert!(dropped);
    let bad = path(&dir, "bad.sol");
    fs::write(&bad, broken).unwrap();
    assert_eq!(turnsolve(&["validate", &fixture("l_tromino.txt"), &bad]).status.code(), Some(2));
}

#[test]
fn geo_solve_validate_render() {
    let dir = TempDir::new().unwrap();
    let (sol, svg) = (path(&dir, "g.sol"), path(&dir, "g.svg"));
    let inst = fixture("geo_triangles.txt");
    assert!(turnsolve(&["solve", &inst, "--goal", "tour", "--out", &sol]).status.success());
    assert_eq!(turnsolve(&["validate", &inst, &sol]).status.code(), Some(0));
    assert!(turnsolve(&["render", &inst, &sol, "--out", &svg]).status.success());
    assert_eq!(fs::read_to_string(&svg).unwrap().matches("<polygon").count(), 2);
    assert_eq!(turnsolve(&["solve", &inst, "--mode", "exact"]).status.code(), Some(1));
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, seed: &str| {
        let p = path(&dir, name);
        let out = turnsolve(&["generate", "--kind", "office", "--pixels", "50", "--seed", seed, "--variant", "penalty", "--out", &p]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        fs::read_to_string(Path::new(&p)).unwrap()
    };
    let (a, b, c) = (run("a.txt", "9"), run("b.txt", "9"), run("c.txt", "10"));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("grid penalty "));
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "bench.csv");
    let out = turnsolve(&["bench", "--sizes", "6,8", "--seeds", "2", "--mode", "approx,exact", "--out", &csv]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,pixels,mode,goal,cost,lp_bound,ratio,wall_ms,status"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.ends_with(",ok")), "{text}");
}

#[test]
fn bad_thread_count_fails() {
    let out = Command::new(env!("CARGO_BIN_EXE_turnsolve"))
        .args(["bench", "--sizes", "4", "--seeds", "1"])
        .env("TURNSOLVE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TURNSOLVE_THREADS"));
}
