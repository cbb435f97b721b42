use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use badmm_cli::CSV_HEADER;

const SMALL: &[&str] = &["--n", "64", "--m", "32", "--jumps", "5", "--quiet"];

fn badmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_badmm"))
        .args(args)
        .output()
        .expect("spawn badmm")
}

fn run_small(dir: &Path, extra: &[&str]) -> Output {
    let mut args = SMALL.to_vec();
    args.extend_from_slice(&["--output", dir.to_str().unwrap()]);
    args.extend_from_slice(extra);
    badmm(&args)
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect()
}

#[test]
fn both_solvers_write_traces_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_small(dir.path(), &["--reg", "both", "--seed", "1"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in ["hadmm.csv", "sadmm.csv", "summary.txt"] {
        assert!(dir.path().join(name).is_file(), "missing {name}");
    }
    let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("[comparison]"));
    assert!(summary.contains("lower final mse_y"));

    let csv = fs::read_to_string(dir.path().join("hadmm.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, CSV_HEADER);
    for key in [
        "# mu0=",
        "# mu_B=",
        "# ell_f=",
        "# ell_phi=",
        "# sigma0=",
        "# sigma1=",
        "# alpha_lower_bound=",
        "# alpha_rule=",
        "# seed=1",
    ] {
        assert!(csv.contains(key), "missing {key}");
    }
    let rows = data_rows(&csv);
    assert!(!rows.is_empty());
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 15);
        assert!(fields[0].parse::<usize>().is_ok());
        for f in &fields[1..] {
            assert!(f.parse::<f64>().is_ok(), "unparsable field {f:?}");
        }
    }
}

#[test]
fn reruns_are_byte_identical_without_timestamp() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let extra = ["--no-timestamp", "--max-iters", "200"];
    assert_eq!(run_small(a.path(), &extra).status.code(), Some(0));
    assert_eq!(run_small(b.path(), &extra).status.code(), Some(0));
    for name in ["hadmm.csv", "sadmm.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
        assert!(!String::from_utf8(x).unwrap().contains("timestamp"));
    }
}

#[test]
fn single_iteration_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_small(dir.path(), &["--reg", "l1", "--max-iters", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("sadmm.csv")).unwrap();
    assert_eq!(data_rows(&csv).len(), 1);
    assert!(!dir.path().join("hadmm.csv").exists());
}

#[test]
fn config_file_values_apply_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# small run\nreg = lhalf\nseed = 9\nmax_iters = 2\nlambda = 0.015\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run_small(
        &out_dir,
        &["--config", cfg.to_str().unwrap(), "--lambda", "0.02"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(out_dir.join("hadmm.csv")).unwrap();
    assert!(csv.contains("# seed=9"));
    assert!(csv.contains("# lambda=2.0000000000000000e-2"));
    assert_eq!(data_rows(&csv).len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(badmm(&["--help"]).status.code(), Some(0));
    assert_eq!(badmm(&["--version"]).status.code(), Some(0));
    assert_eq!(badmm(&["--n", "-5"]).status.code(), Some(1));
    assert_eq!(badmm(&["--bogus"]).status.code(), Some(1));
    assert_eq!(badmm(&["--reg", "l2"]).status.code(), Some(1));
    assert_eq!(
        badmm(&["--config", "/nonexistent/badmm.cfg"]).status.code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = run_small(&blocker, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // prox-linear needs mu > alpha |B|^2 = alpha
    let out = run_small(
        dir.path(),
        &["--strategy", "prox_linear", "--max-iters", "5"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu"));
}

#[test]
fn prox_linear_runs_when_mu_is_large_enough() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_small(
        dir.path(),
        &[
            "--strategy",
            "prox_linear",
            "--mu",
            "15",
            "--max-iters",
            "50",
            "--reg",
            "lhalf",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("hadmm.csv")).unwrap();
    assert!(csv.contains("# strategy=prox_linear"));
    assert_eq!(data_rows(&csv).len(), 50);
}
