use std::path::{Path, PathBuf};
use std::process::Command;

use dirac_utm::ScenarioConfig;
use dirac_utm_cli::{convergence, run, CliError, RunOptions};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.cfg"))
}

fn opts(out: &Path) -> RunOptions {
    RunOptions { out: Some(out.to_path_buf()), ..Default::default() }
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-utm")).args(args).output().unwrap()
}

const SMALL_MASSIVE: &str = r#"{
  "name": "small_massive",
  "geometry": {"kind": "two_half_lines", "horizon": 0.5},
  "masses": [1.0, 2.0],
  "initial": {"left": {"psi1": {"type": "gaussian_window", "center": -1.0, "width": 0.3}}},
  "reference": {"dx": 0.015625},
  "query": {"x_count": 11, "times": [0.5]},
  "erratum_fixes": true
}"#;

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn exit_codes_separate_config_and_solver_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    let ok = binary(&["run", scenario("empty_data").to_str().unwrap(), "--out", out]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    let missing = binary(&["run", dir.path().join("nope.cfg").to_str().unwrap(), "--out", out]);
    assert_eq!(missing.status.code(), Some(1));

    let bad = write_config(dir.path(), "bad.cfg", &SMALL_MASSIVE.replace("\"masses\": [1.0, 2.0]", "\"masses\": [-1.0, 2.0]"));
    assert_eq!(binary(&["run", bad.to_str().unwrap(), "--out", out]).status.code(), Some(1));

    // the printed lists cannot meet the tail bound within this budget
    let strict = SMALL_MASSIVE
        .replace("\"erratum_fixes\": true", "\"erratum_fixes\": false")
        .replace("\"query\"", "\"quadrature\": {\"k_max_limit\": 256.0},\n  \"query\"");
    let strict = write_config(dir.path(), "strict.cfg", &strict);
    let failed = binary(&["run", strict.to_str().unwrap(), "--out", out]);
    assert_eq!(failed.status.code(), Some(2), "{}", String::from_utf8_lossy(&failed.stderr));
    assert!(String::from_utf8_lossy(&failed.stderr).contains("integral"));

    let few = binary(&["convergence", scenario("empty_data").to_str().unwrap(), "--levels", "2", "--out", out]);
    assert_eq!(few.status.code(), Some(1));
}

#[test]
fn run_writes_the_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.cfg", SMALL_MASSIVE);
    let o = RunOptions { dump_traces: true, dump_terms: true, ..opts(dir.path()) };
    let summary = run(&cfg, &o).unwrap();
    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).unwrap();

    let solution = read("solution.csv");
    assert!(solution.starts_with("region,component,x,t,re,im,method\n"));
    // 2 regions x 2 components x 11 points x 1 time, for both methods
    assert_eq!(solution.lines().count(), 1 + 2 * 44);

    let errors = read("errors.csv");
    assert!(errors.starts_with("kind,region,component,x,t,abs_error\n"));
    assert!(errors.lines().any(|l| l.starts_with("linf,")));
    assert!(errors.lines().any(|l| l.starts_with("l2_rms,")));

    assert!(read("report.txt").contains("linf"));
    assert!(read("traces.csv").lines().count() > 1);
    assert!(read("terms.csv").starts_with("region,component,x,t,integral,re,im,k_max,tail\n"));
    assert!(summary.linf <= 1e-3, "{}", summary.linf);
}

#[test]
fn empty_data_gives_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run(&scenario("empty_data"), &opts(dir.path())).unwrap();
    assert!(!summary.values.is_empty());
    for v in &summary.values {
        assert_eq!(v.utm.norm(), 0.0);
        assert_eq!(v.reference.norm(), 0.0);
    }
}

#[test]
fn massless_runs_are_exact() {
    for name in ["massless_halfline", "massless_finite_short", "massless_finite_long"] {
        let dir = tempfile::tempdir().unwrap();
        let summary = run(&scenario(name), &opts(dir.path())).unwrap();
        assert!(summary.linf <= 1e-12, "{name}: {:e}", summary.linf);
        assert!(summary.variant.is_none());
    }
}

#[test]
fn runs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = write_config(a.path(), "small.cfg", SMALL_MASSIVE);
    run(&cfg, &opts(&a.path().join("out"))).unwrap();
    run(&cfg, &opts(b.path())).unwrap();
    for name in ["solution.csv", "errors.csv"] {
        let x = std::fs::read(a.path().join("out").join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn shipped_configs_round_trip() {
    for entry in std::fs::read_dir(scenario("x").parent().unwrap()).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ScenarioConfig::load(&path).unwrap();
        let again = ScenarioConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again, "{}", path.display());
        assert!(cfg.scenario().is_ok());
    }
}

#[test]
fn convergence_reports_second_order_for_massive_meshes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.cfg", SMALL_MASSIVE);
    assert!(matches!(convergence(&cfg, 2, &opts(dir.path())), Err(CliError::Config(_))));
    let rows = convergence(&cfg, 4, &opts(dir.path())).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].ref_diff.is_none() && rows[1].ref_order.is_none());
    for r in &rows[2..] {
        let order = r.ref_order.unwrap();
        assert!((1.8..=2.2).contains(&order), "{order}");
    }
    let text = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert!(text.starts_with("level,dx,ref_diff,ref_order,panels,k_max,utm_error,utm_change\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn massless_convergence_has_no_order() {
    let dir = tempfile::tempdir().unwrap();
    let rows = convergence(&scenario("massless_finite_short"), 3, &opts(dir.path())).unwrap();
    for r in &rows {
        assert!(r.ref_order.is_none());
        assert!(r.utm_error <= 1e-12);
    }
}
