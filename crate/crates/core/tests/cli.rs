use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn kvnlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kvnlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("KVNLAB_THREADS")
        .output()
        .unwrap()
}

fn config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/two_slit_classical.csv")
}

#[test]
fn default_classical_two_slit_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, "fig.cfg", "experiment = two_slit_classical\noutput = fig.csv\n");
    let out = kvnlab(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cmp = kvnlab(&["compare", golden().to_str().unwrap(), "fig.csv", "--tol", "1e-6"], dir.path());
    assert_eq!(code(&cmp), 0, "{}", String::from_utf8_lossy(&cmp.stdout));
}

#[test]
fn compare_reports_failure_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, "fig.cfg", "experiment = two_slit_classical\ndelta = 0.2\noutput = wide.csv\n");
    assert_eq!(code(&kvnlab(&["run", cfg.to_str().unwrap()], dir.path())), 0);
    let cmp = kvnlab(&["compare", golden().to_str().unwrap(), "wide.csv", "--tol", "1e-6"], dir.path());
    assert_eq!(code(&cmp), 1);
    assert!(String::from_utf8_lossy(&cmp.stdout).contains("FAIL"));
}

#[test]
fn overlapping_slits_are_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, "bad.cfg", "experiment = two_slit_classical\nx_A = 0.1\ndelta = 0.1\n");
    let out = kvnlab(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 2);
    assert!(!dir.path().join("two_slit_classical.csv").exists());
}

#[test]
fn unknown_keys_are_named_in_the_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, "bad.cfg", "experiment = quantum_gaussian\nwidth = 3\n");
    let out = kvnlab(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("width"));
    let over = kvnlab(&["run", cfg.to_str().unwrap(), "--nope", "1"], dir.path());
    assert_eq!(code(&over), 2);
}

#[test]
fn under_resolved_kernels_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, "q.cfg", "experiment = two_slit_quantum\nhbar = 1e-5\nn_x = 101\n");
    let out = kvnlab(&["run", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn io_failures_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&kvnlab(&["run", "missing.cfg"], dir.path())), 4);
    let cfg = config(&dir, "ok.cfg", "experiment = quantum_gaussian\noutput = no/such/dir/out.csv\n");
    assert_eq!(code(&kvnlab(&["run", cfg.to_str().unwrap()], dir.path())), 4);
    assert_eq!(code(&kvnlab(&["compare", "a.csv", "b.csv", "--tol", "1"], dir.path())), 4);
}

#[test]
fn sidecar_records_parameters_and_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, "dark.cfg", "experiment = two_slit_classical\nx_A = 12\nn_x = 41\n");
    let out = kvnlab(&["run", cfg.to_str().unwrap(), "--svg"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("two_slit_classical.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["experiment"], "two_slit_classical");
    assert_eq!(meta["parameters"]["x_A"], 12.0);
    let warnings = meta["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("flux floor")));
    assert!(dir.path().join("two_slit_classical.svg").exists());
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, "q.cfg", "experiment = two_slit_quantum\nn_x = 241\n");
    let run = |threads: Option<&str>, name: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_kvnlab"));
        cmd.args(["run", cfg.to_str().unwrap(), "-o", name]).current_dir(dir.path());
        match threads {
            Some(n) => cmd.env("KVNLAB_THREADS", n),
            None => cmd.env_remove("KVNLAB_THREADS"),
        };
        let out = cmd.output().unwrap();
        (code(&out), fs::read(dir.path().join(name)).ok())
    };
    let (c1, one) = run(Some("1"), "one.csv");
    let (c2, many) = run(None, "many.csv");
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(one, many);
    assert_eq!(run(Some("zero"), "bad.csv").0, 2);
}

#[test]
fn every_experiment_runs_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["classical_gaussian", "quantum_gaussian", "lambda_rep", "decoupling", "kvn_postulate_check"] {
        let cfg = config(&dir, &format!("{name}.cfg"), &format!("experiment = {name}\n"));
        let out = kvnlab(&["run", cfg.to_str().unwrap()], dir.path());
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(dir.path().join(format!("{name}.csv")).exists());
    }
}

#[test]
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&kvnlab(&["--help"], dir.path())), 0);
    assert_eq!(code(&kvnlab(&["frobnicate"], dir.path())), 2);
}
