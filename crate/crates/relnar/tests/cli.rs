//! Black-box tests of the command line binary: flag handling, file outputs,
//! exit codes, and replay behavior.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn relnar(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relnar"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn single_run_prints_csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = relnar(&["--phases", "XY", "--blocks", "2"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "phase,block,accuracy,conf_mutual,conf_combinatorial");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("XY,1,"));
}

#[test]
fn out_and_trace_flags_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = relnar(
        &[
            "--phases", "XY", "--blocks", "1",
            "--out", "metrics.csv",
            "--trace", "run.trace",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert!(csv.starts_with("phase,block,"));
    let trace = fs::read_to_string(dir.path().join("run.trace")).unwrap();
    assert!(trace.contains("<(rel * SAME) --> (loc * ocr)>. :|:"));
}

#[test]
fn same_seed_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = relnar(
            &["--seed", "11", "--phases", "XY,YX", "--out", name],
            dir.path(),
        );
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_sweep_writes_one_csv_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = relnar(
        &["--seeds", "3..5", "--phases", "XY", "--blocks", "1", "--out", "sweep"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    for seed in 3..=5 {
        let path = dir.path().join("sweep").join(format!("metrics_seed{seed}.csv"));
        assert!(path.exists(), "missing {}", path.display());
    }
}

#[test]
fn sweep_without_out_dir_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = relnar(&["--seeds", "1..2", "--phases", "XY"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--out"));
}

#[test]
fn unknown_phase_fails_with_a_hint() {
    let dir = tempfile::tempdir().unwrap();
    let out = relnar(&["--phases", "QQ"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("unknown phase `QQ`"));
}

#[test]
fn empty_replay_script_exits_zero_with_empty_trace() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.txt"), "").unwrap();
    let out = relnar(&["--replay", "empty.txt"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "");
}

#[test]
fn replay_checks_expectations_and_prints_the_trace() {
    let dir = tempfile::tempdir().unwrap();
    let script = "\
<(rel * SAME) --> (loc * ocr)>. :|:
<(sample * X1) --> (loc * ocr)>. :|:
<(left * Y1) --> (loc * ocr)>. :|:
<(right * Y2) --> (loc * ocr)>. :|:
G! :|:
!action left
G. :|:
//expect <(X1 * Y1) --> SAME>
";
    fs::write(dir.path().join("script.txt"), script).unwrap();
    let out = relnar(&["--replay", "script.txt"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("<(X1 * Y1) --> SAME>"));
    assert!(stderr(&out).contains("1 expectations checked"));
}

#[test]
fn failed_expectation_exits_nonzero_with_the_line_number() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "G! :|:\n").unwrap();
    let out = relnar(&["--replay", "bad.txt"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("line 1"));

    fs::write(
        dir.path().join("miss.txt"),
        "<a --> b>. :|:\n//expect nothing-does\n",
    )
    .unwrap();
    let out = relnar(&["--replay", "miss.txt"], dir.path());
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("nothing-does"), "{err}");
}
