use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blockhole"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("blockhole-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn generate_then_analyze_cylinder() {
    let gen = run(&["generate", "cylinder", "4", "4", "4"]);
    assert!(gen.status.success());
    let out = run_stdin(&["analyze", "-"], &gen.stdout);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("idof = 2\n"));
}

#[test]
fn contract_and_verify_expanded_tower() {
    let tower = scratch("tower.bhp");
    let big = scratch("big.bhp");
    let cert = scratch("cert.txt");
    let base = scratch("base.bhp");
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    assert!(run(&["generate", "tower", "5", "-o", &s(&tower)]).status.success());
    let o = run(&["--seed", "9", "expand", &s(&tower), "--subdiv", "6", "--insert", "6", "--flip", "20", "-o", &s(&big)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["contract", &s(&big), "-o", &s(&cert), "--to-base", &s(&base)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", &s(&base), &s(&cert), &s(&big)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    // a verify against the wrong original fails validation
    let o = run(&["verify", &s(&base), &s(&cert), &s(&tower)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn double_banana_is_sparse_but_flexible() {
    let text = "graph 1\nvertices 0 1 2 3 4 5 6 7\nedges 0-2 0-3 0-4 1-2 1-3 1-4 2-3 2-4 3-4 \
                0-5 0-6 0-7 1-5 1-6 1-7 5-6 5-7 6-7\n";
    let out = run_stdin(&["analyze", "-"], text.as_bytes());
    let s = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(s.contains("sparse = true\n"), "{s}");
    assert!(s.contains("rank = 17\n"), "{s}");
    assert!(s.contains("isostatic = false\n"), "{s}");
}

#[test]
fn parse_errors_exit_two_with_line() {
    let out = run_stdin(&["analyze", "-"], b"bhp 1\nvertices 0 1 2\nnonsense here\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn precondition_failures_exit_one() {
    assert_eq!(run(&["generate", "cylinder", "4", "5", "4"]).status.code(), Some(1));
}

#[test]
fn transmit_prints_csv_and_summary() {
    let gen = run(&["generate", "cylinder", "8", "4", "4"]);
    let out = run_stdin(&["transmit", "-", "--stop-at-redundant"], &gen.stdout);
    assert!(out.status.success());
    let s = stdout(&out);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "step,edge,idof,hole_idof_h1,hole_idof_h2,independent,transmitted");
    assert_eq!(rows.len(), 1 + 1 + 7);
    assert!(rows[8].ends_with(",false,false"));
    assert!(s.contains("# transmission_window = 5-6\n"));
}

#[test]
fn transmit_with_explicit_order() {
    let gen = run(&["generate", "cylinder", "4", "4", "4"]);
    let out = run_stdin(&["transmit", "-", "--order", "1-3"], &gen.stdout);
    assert!(out.status.success());
    assert!(stdout(&out).contains("1,1-3,1,1,1,true,true"));
}

#[test]
fn transforms_round_trip_through_text() {
    let tower = run(&["generate", "tower", "4"]);
    let swapped = run_stdin(&["transform", "swap", "-"], &tower.stdout);
    assert!(swapped.status.success());
    let back = run_stdin(&["transform", "swap", "-"], &swapped.stdout);
    assert_eq!(stdout(&back), stdout(&tower));

    let block = run(&["generate", "block", "5"]);
    let split = run_stdin(&["transform", "cycle-split", "-", "--cycle", "0,1,2", "--select", "0=3"], &block.stdout);
    assert!(split.status.success());
    let a = run_stdin(&["analyze", "-"], &split.stdout);
    assert!(stdout(&a).contains("isostatic = true\n"));
}

#[test]
fn sweep_runs_in_parallel() {
    let out = run(&["--jobs", "2", "sweep", "4", "5", "--trials", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1 + 9);
}
