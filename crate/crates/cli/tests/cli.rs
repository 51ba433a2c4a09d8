use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lrmin_core::{parse_dimacs, parse_grammar, Coloring, MergeScheme, NodeStateMap};
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn lrmin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrmin"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reduce_minimize_recover_pipeline() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let out = lrmin(
        &[
            "reduce",
            path(&data("g33e.col")),
            "-o",
            "g.grammar",
            "--map",
            "map.txt",
            "--trace",
            "trace.txt",
        ],
        d,
    );
    assert!(out.status.success(), "{out:?}");

    let out = lrmin(&["lr1", "g.grammar"], d);
    assert!(stdout(&out).ends_with("states 33\ntransitions 32\n"));

    let out = lrmin(
        &[
            "minimize",
            "g.grammar",
            "--mode",
            "exact",
            "--scheme",
            "s.txt",
            "--verify",
        ],
        d,
    );
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("merges 1\n"));

    let out = lrmin(
        &[
            "recover", "--scheme", "s.txt", "--map", "map.txt", "-o", "c.txt",
        ],
        d,
    );
    assert!(out.status.success());
    let coloring = Coloring::parse(&fs::read_to_string(d.join("c.txt")).unwrap()).unwrap();
    assert_eq!(coloring, Coloring::new(vec![vec![1], vec![2, 3]]));
}

#[test]
fn emitted_files_parse_back() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert!(lrmin(
        &[
            "reduce",
            path(&data("g55.col")),
            "-o",
            "g.grammar",
            "--map",
            "map.txt"
        ],
        d
    )
    .status
    .success());
    parse_grammar(&fs::read_to_string(d.join("g.grammar")).unwrap()).unwrap();
    let map = NodeStateMap::parse(&fs::read_to_string(d.join("map.txt")).unwrap()).unwrap();
    assert_eq!(map.len(), 4);

    assert!(lrmin(&["conflict-graph", "g.grammar", "-o", "cg.col"], d)
        .status
        .success());
    let cg = parse_dimacs(&fs::read_to_string(d.join("cg.col")).unwrap()).unwrap();
    assert_eq!(
        cg,
        parse_dimacs(&fs::read_to_string(data("g55.col")).unwrap()).unwrap()
    );

    assert!(lrmin(
        &[
            "minimize",
            "g.grammar",
            "--mode",
            "greedy",
            "--seed",
            "3",
            "--scheme",
            "s.txt"
        ],
        d
    )
    .status
    .success());
    let scheme = MergeScheme::parse(&fs::read_to_string(d.join("s.txt")).unwrap()).unwrap();
    let out = lrmin(&["minimize", "g.grammar", "--apply", "s.txt"], d);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains(&format!("merges {}\n", scheme.merges())));

    assert!(
        lrmin(&["oracle-color", path(&data("g55.col")), "-o", "k.txt"], d)
            .status
            .success()
    );
    Coloring::parse(&fs::read_to_string(d.join("k.txt")).unwrap()).unwrap();
}

#[test]
fn outputs_are_repeatable() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let g = data("appendix1.grammar");
    for args in [
        vec!["lr1", path(&g)],
        vec!["dot", path(&g), "--show-items"],
        vec!["minimize", path(&g), "--mode", "greedy", "--seed", "9"],
        vec!["reduce", path(&data("g55.col"))],
    ] {
        let (a, b) = (lrmin(&args, d), lrmin(&args, d));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_reports_and_scans_directories() {
    let dir = TempDir::new().unwrap();
    let out = lrmin(&["verify", path(&data("g55.col"))], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("k=2") && text.contains("states 59 -> 57"),
        "{text}"
    );
    assert!(!text.contains("FAIL"));

    let out = lrmin(&["verify", path(&data(""))], dir.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out).matches("k=").count(), 7);
}

#[test]
fn lalr_conflicts_exit_one() {
    let dir = TempDir::new().unwrap();
    let out = lrmin(&["lalr", path(&data("table2_right.grammar"))], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("reduce-reduce conflict on )"), "{err}");

    let out = lrmin(&["lalr", path(&data("table2_left.grammar"))], dir.path());
    assert!(out.status.success());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(
        lrmin(&["stats", "missing.grammar"], d).status.code(),
        Some(2)
    );
    assert_eq!(lrmin(&["frobnicate"], d).status.code(), Some(2));
    fs::write(d.join("bad.grammar"), "S ::= a\nb c\n").unwrap();
    assert_eq!(lrmin(&["lr1", "bad.grammar"], d).status.code(), Some(2));
    fs::write(
        d.join("amb.grammar"),
        "S ::= A\nS ::= B\nA ::= x\nB ::= x\n",
    )
    .unwrap();
    assert_eq!(
        lrmin(&["minimize", "amb.grammar"], d).status.code(),
        Some(1)
    );
    assert_eq!(lrmin(&["lr1", "amb.grammar"], d).status.code(), Some(0));
    let out = lrmin(
        &[
            "minimize",
            path(&data("table2_left.grammar")),
            "--budget",
            "1",
        ],
        d,
    );
    assert_eq!(out.status.code(), Some(1));
    fs::write(d.join("one.col"), "p edge 1 0\n").unwrap();
    assert_eq!(lrmin(&["reduce", "one.col"], d).status.code(), Some(1));
}

#[test]
fn stats_output() {
    let dir = TempDir::new().unwrap();
    let out = lrmin(&["stats", path(&data("appendix1.grammar"))], dir.path());
    assert_eq!(
        stdout(&out),
        "nonterminals 8\nterminals 26\nproductions 31\n"
    );
}
