use std::path::Path;
use std::process::Command;

use resolvent_quad::harness::report::parse_history_csv;

const RQUAD: &str = env!("CARGO_BIN_EXE_rquad");

const TRIDIAG: &str = "%%MatrixMarket matrix coordinate real symmetric
4 4 7
1 1 2.0
2 1 -1.0
2 2 2.0
3 2 -1.0
3 3 2.0
4 3 -1.0
4 4 2.0
";

fn write_matrix(dir: &Path) -> std::path::PathBuf {
    let p = dir.join("t.mtx");
    std::fs::write(&p, TRIDIAG).unwrap();
    p
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(RQUAD).args(args).output().unwrap()
}

#[test]
fn run_writes_summary_and_history() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path());
    let out = dir.path().join("out");
    let o = run(&[
        "run",
        "--matrix",
        m.to_str().unwrap(),
        "--shifts",
        "unit-circle:m=4",
        "--reference",
        "dense",
        "--history",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = String::from_utf8(o.stdout).unwrap();
    for m in ["lanczos", "cocg", "cocr", "minres"] {
        assert!(table.contains(m));
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["problem"]["n"], 4);
    assert_eq!(summary["methods"].as_array().unwrap().len(), 4);
    let csv = std::fs::read(out.join("history.csv")).unwrap();
    let records = parse_history_csv(&csv[..]).unwrap();
    assert!(!records.is_empty());
}

#[test]
fn history_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path());
    let mut files = Vec::new();
    for tag in ["a", "b"] {
        let out = dir.path().join(tag);
        let o = run(&[
            "run",
            "--matrix",
            m.to_str().unwrap(),
            "--vector",
            "random:seed=3",
            "--history",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        files.push(std::fs::read(out.join("history.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path());
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        format!(
            "matrix = {:?}\nmethods = [\"lanczos\", \"minres\"]\nrtol = 1e-12\n",
            m.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--methods",
        "lanczos",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("lanczos") && !table.contains("minres"));
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path());
    let m = m.to_str().unwrap();
    for args in [
        vec!["run", "--matrix", m, "--methods", ""],
        vec!["run", "--matrix", m, "--rtol", "-1"],
        vec!["run", "--matrix", "/nonexistent.mtx"],
        vec!["run", "--matrix", m, "--shifts", "values:1+1i,1+1i"],
        vec!["run", "--bogus"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn shifts_and_check_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(dir.path());
    let o = run(&["shifts", "--shifts", "unit-circle:m=8"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 8);
    let o = run(&[
        "shifts",
        "--shifts",
        "spectrum-offset:zeta=1e-1,1e-2;lambda=max",
        "--matrix",
        m.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);
    let o = run(&["check", "--matrix", m.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("real symmetric: yes"));
}
