use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn rbr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const C4_ALL: &str = "p rbg 4 4\nr 1\nb 1\nr 2\nb 2\nr 3\nb 3\nr 4\nb 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n";
const STAR: &str = "p rbg 4 3\nr 1\nb 2\nb 3\nb 4\ne 1 2\ne 1 3\ne 1 4\n";
const LONE_BLUE: &str = "p rbg 1 0\nb 1\n";
const NO_BLUE: &str = "p rbg 3 1\nr 1\nr 2\nr 3\ne 1 2\n";

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("one JSON object")
}

#[test]
fn alpha_on_c4_reaches_gamma_one_with_one_deletion() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.rbg", C4_ALL);
    for solver in ["auto", "bruteforce", "dc", "mw"] {
        let o = rbr(&["solve", "--graph", s(&g), "--k", "1", "--alpha", "1", "--solver", solver, "--json", "--witness"]);
        assert_eq!(o.status.code(), Some(0), "{solver}");
        let v = json(&o);
        assert_eq!(v["answer"], true);
        assert_eq!(v["s_min"], 1);
        assert_eq!(v["gamma_rb"], 2);
        assert_eq!(v["gamma"], 1);
        assert_eq!(v["S"].as_array().unwrap().len(), 1);
        assert_eq!(v["D"].as_array().unwrap().len(), 1);
        assert!(v["time_ms"].is_number());
    }
}

#[test]
fn no_answers_still_exit_zero() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.rbg", C4_ALL);
    let o = rbr(&["solve", "--graph", s(&g), "--k", "0", "--gamma", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("answer: no"));
    assert!(stdout(&o).contains("s_min: 1"));
}

#[test]
fn large_gamma_needs_no_deletion() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "star.rbg", STAR);
    let o = rbr(&["solve", "--graph", s(&g), "--k", "0", "--gamma", "4", "--json"]);
    let v = json(&o);
    assert_eq!(v["answer"], true);
    assert_eq!(v["s_min"], 0);
    assert!(v["S"].is_null());
}

#[test]
fn infeasible_alpha_exits_three() {
    let dir = TempDir::new().unwrap();
    let lone = write(&dir, "lone.rbg", LONE_BLUE);
    let o = rbr(&["solve", "--graph", s(&lone), "--k", "0", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(3));
    let star = write(&dir, "star.rbg", STAR);
    let o = rbr(&["solve", "--graph", s(&star), "--k", "0", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.rbg", C4_ALL);
    assert_eq!(rbr(&["solve", "--graph", s(&g), "--k", "1"]).status.code(), Some(2));
    assert_eq!(rbr(&["solve", "--graph", s(&g), "--k", "1", "--gamma", "1", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(rbr(&["solve", "--graph", s(&g), "--k", "1", "--gamma", "1", "--solver", "cw"]).status.code(), Some(2));
    let bad = write(&dir, "bad.rbg", "p rbg 2 1\nr 1\ne 1 2\n");
    let o = rbr(&["solve", "--graph", s(&bad), "--k", "1", "--gamma", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("vertex 2 has no color"));
    let missing = dir.path().join("nope.rbg");
    assert_eq!(rbr(&["gamma", "--graph", s(&missing)]).status.code(), Some(2));
}

#[test]
fn gamma_examples() {
    let dir = TempDir::new().unwrap();
    for (text, want) in [(STAR, "1"), (C4_ALL, "2"), (NO_BLUE, "0"), (LONE_BLUE, "INFEASIBLE")] {
        let g = write(&dir, "g.rbg", text);
        for solver in ["bruteforce", "dc", "mw"] {
            let o = rbr(&["gamma", "--graph", s(&g), "--solver", solver]);
            assert_eq!(o.status.code(), Some(0));
            assert!(stdout(&o).contains(&format!("gamma_rb: {want}\n")), "{solver}: {}", stdout(&o));
        }
    }
}

#[test]
fn generated_expression_feeds_the_cw_solver() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.rbg");
    let o = rbr(&["gen", "cw", "--cw", "3", "--n", "9", "--seed", "11", "--out", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    let e = dir.path().join("g.cw");
    let run = |solver: &str, extra: &[&str]| {
        let mut args = vec!["solve", "--graph", s(&g), "--k", "1", "--gamma", "2", "--json", "--solver", solver];
        args.extend_from_slice(extra);
        json(&rbr(&args))
    };
    let oracle = run("bruteforce", &[]);
    for extra in [&["--cw-expr", s(&e)][..], &["--cw-expr", s(&e), "--cw-union", "fast", "--witness"][..]] {
        let v = run("cw", extra);
        assert_eq!(v["answer"], oracle["answer"]);
        assert_eq!(v["s_min"], oracle["s_min"]);
    }
}

#[test]
fn generators_are_deterministic() {
    for args in [
        &["gen", "er", "--n", "12", "--edge-prob", "0.4", "--seed", "5"][..],
        &["gen", "cluster", "--cliques", "3", "--clique-size", "3", "--modulator", "2", "--seed", "5"][..],
        &["gen", "modular", "--depth", "2", "--fanout", "4", "--seed", "5"][..],
    ] {
        let (a, b) = (rbr(args), rbr(args));
        assert_eq!(a.status.code(), Some(0));
        assert!(stdout(&a).starts_with("p rbg "));
        assert_eq!(a.stdout, b.stdout);
    }
    assert_eq!(rbr(&["gen", "er", "--n", "3", "--edge-prob", "1.5"]).status.code(), Some(2));
}

#[test]
fn auto_thresholds_come_from_config() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.rbg", C4_ALL);
    let cfg = write(&dir, "auto.cfg", "bruteforce_max_n = 0\ndc_max_modulator = 0\n");
    let o = rbr(&["solve", "--graph", s(&g), "--k", "1", "--gamma", "1", "--json", "--config", s(&cfg)]);
    assert_eq!(json(&o)["solver"], "mw");
    let broken = write(&dir, "broken.cfg", "speed = 11\n");
    let o = rbr(&["solve", "--graph", s(&g), "--k", "1", "--gamma", "1", "--config", s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mpc_subcommand() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "m.txt", "u 2\ns 1 1\ns 1 2\ns 2 1 2\npe 1 1\npe 2 1\npx 1 5\npx 2 1\nk 1\n");
    let o = rbr(&["mpc", "--instance", s(&inst), "--json"]);
    let v = json(&o);
    assert_eq!(v["price"], 6);
    assert_eq!(v["chosen"], serde_json::json!([1]));
    let o = rbr(&["mpc", "--instance", s(&inst), "--k", "2"]);
    assert!(stdout(&o).contains("price: 8"));
}

#[test]
fn difftest_passes_on_correct_solvers() {
    let o = rbr(&["difftest", "--count", "100", "--max-n", "8", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("mismatches: 0"));
}

#[test]
fn difftest_reports_an_injected_fault_with_a_replayable_repro() {
    let dir = TempDir::new().unwrap();
    let o = rbr(&[
        "difftest",
        "--count",
        "30",
        "--max-n",
        "8",
        "--solvers",
        "dc,mw",
        "--inject-fault",
        "mw",
        "--repro-dir",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    assert!(text.contains("first mismatch: mw"), "{text}");
    assert!(text.contains("--- repro.rbg"));
    let line = text.lines().find(|l| l.starts_with("after shrinking")).unwrap();
    let expected = line.split("expected answer=").nth(1).unwrap();
    let s_min: usize = expected.split("s_min=").nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    // the dump re-parses and the oracle reproduces the expected side
    let rerun = text.lines().find(|l| l.starts_with("rerun:")).unwrap();
    let k = rerun.split("--k ").nth(1).unwrap().split(' ').next().unwrap();
    let gamma = rerun.split("--gamma ").nth(1).unwrap().split(' ').next().unwrap();
    let graph = dir.path().join("repro.rbg");
    let expr = dir.path().join("repro.cw");
    for solver in ["bruteforce", "mw", "cw"] {
        let v = json(&rbr(&[
            "solve", "--graph", s(&graph), "--cw-expr", s(&expr), "--k", k, "--gamma", gamma, "--solver", solver, "--json",
        ]));
        assert_eq!(v["s_min"], s_min, "{solver}");
    }
}
