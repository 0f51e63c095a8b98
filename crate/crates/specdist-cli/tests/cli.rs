//! End-to-end tests of the `specdist` binary: real process spawns, real
//! files, asserted exit codes and output bytes.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_specdist")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(bin())
        .args(args)
        .output()
        .expect("binary spawns");
    (
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn dist_two_point_pure_states_is_one() {
    let (stdout, _, code) = run(&[
        "dist",
        &data("two_point_half.json"),
        &data("pure_up.json"),
        &data("pure_down.json"),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("distance = 1.00000"), "{stdout}");
    assert!(stdout.contains("iterations = "), "{stdout}");
}

#[test]
fn dist_across_disconnected_components_prints_inf() {
    let (stdout, _, code) = run(&[
        "dist",
        &data("metric_disconnected.json"),
        &data("p_e1.json"),
        &data("p_e3.json"),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("distance = inf"), "{stdout}");
}

#[test]
fn dist_point_to_barycenter_on_the_unit_triangle() {
    let (stdout, _, code) = run(&[
        "dist",
        &data("metric_unit3.json"),
        &data("p_e1.json"),
        &data("p_uniform3.json"),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("distance = 0.666667"), "{stdout}");
}

#[test]
fn transport_emits_value_duals_and_plan() {
    let (stdout, _, code) = run(&[
        "transport",
        &data("metric_unit3.json"),
        &data("p_e1.json"),
        &data("p_uniform3.json"),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("value = 0.666667"), "{stdout}");
    assert!(stdout.contains("gap = 0"), "{stdout}");
    assert!(stdout.contains("dual_a"), "{stdout}");
    assert!(stdout.contains("plan (row-stochastic):"), "{stdout}");
}

#[test]
fn pythagoras_grid_over_two_segments_is_all_equality() {
    let (stdout, _, code) = run(&[
        "pythagoras",
        &data("two_point_half.json"),
        &data("two_point_half.json"),
        "--grid-steps",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "left,right,phi,psi,d_left,d_right,d_product,d_spectral,ratio,verdict"
    );
    let rows: Vec<&str> = lines.collect();
    // 9 grid product states, all unordered pairs
    assert_eq!(rows.len(), 36);
    for row in rows {
        assert!(row.ends_with(",equality"), "unexpected verdict in {row}");
    }
}

#[test]
fn pythagoras_explicit_states_recover_the_diagonal() {
    let (stdout, _, code) = run(&[
        "pythagoras",
        &data("two_point_half.json"),
        &data("two_point_half.json"),
        "--pairs",
        "explicit",
        "--states",
        &data("pure_up.json"),
        &data("pure_up.json"),
        &data("pure_down.json"),
        &data("pure_down.json"),
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let row = stdout.lines().nth(1).expect("one data row");
    let fields: Vec<&str> = row.split(',').collect();
    let d_product: f64 = fields[6].parse().unwrap();
    let d_spectral: f64 = fields[7].parse().unwrap();
    assert!((d_product - std::f64::consts::SQRT_2).abs() <= 1e-12);
    assert!((d_spectral - std::f64::consts::SQRT_2).abs() <= 1e-4);
    assert_eq!(*fields.last().unwrap(), "equality");
}

#[test]
fn surface_grid_hits_center_and_corners() {
    let (stdout, _, code) = run(&["surface", "--resolution", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "kind,t,s,x,y,z");
    assert!(stdout.contains("grid,0,0,0,0,0"), "{stdout}");
    assert!(stdout.contains("grid,1,1,1,1,1"), "{stdout}");
    assert!(stdout.contains("grid,1,-1,1,-1,-1"), "{stdout}");
    assert_eq!(stdout.matches("vertex,").count(), 4);
    assert!(stdout.contains("vertex,-1,-1,-1,-1,1"), "{stdout}");

    let (_, stderr, code) = run(&["surface", "--resolution", "1"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("at least 2"), "{stderr}");
}

#[test]
fn marginal_projection_flattens_the_correlated_mixture() {
    let (stdout, _, code) = run(&["marginal-projection", &data("state_correlated.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("f(state) = (0, 0, 1.00000)"), "{stdout}");
    assert!(stdout.contains("f(product of marginals) = (0, 0, 0)"), "{stdout}");
    assert!(stdout.contains("residual = 0"), "{stdout}");
}

#[test]
fn verify_rejects_unknown_suites() {
    let (_, stderr, code) = run(&["verify", "nonsense"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("unknown suite"), "{stderr}");
    assert!(stderr.contains("oracles"), "{stderr}");
}

#[test]
fn verify_transport_suite_passes() {
    let (stdout, _, code) = run(&["verify", "transport"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("4/4 checks passed"), "{stdout}");
    assert!(!stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn random_sweeps_are_deterministic_for_a_fixed_seed() {
    let args = [
        "pythagoras",
        &data("two_point_half.json"),
        &data("two_point_half.json"),
        "--pairs",
        "random",
        "--count",
        "3",
        "--format",
        "csv",
        "--seed",
        "7",
    ];
    let (first, _, code1) = run(&args);
    let (second, _, code2) = run(&args);
    assert_eq!(code1, 0);
    assert_eq!(code2, 0);
    assert_eq!(first, second, "same seed must give identical bytes");

    let mut other = args;
    other[10] = "8";
    let (third, _, _) = run(&other);
    assert_ne!(first, third, "different seeds must move the sweep");
}

#[test]
fn out_flag_writes_the_report_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("surface_report.csv");
    let path_str = path.to_str().unwrap();
    let (stdout, _, code) = run(&[
        "surface",
        "--resolution",
        "2",
        "--format",
        "csv",
        "--out",
        path_str,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty(), "report must go to the file, not stdout");
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("kind,t,s,x,y,z\n"), "{written}");
}

#[test]
fn invalid_state_files_exit_one_with_the_violated_invariant() {
    let (_, stderr, code) = run(&[
        "dist",
        &data("two_point_half.json"),
        &data("p_bad.json"),
        &data("pure_down.json"),
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("error:"), "{stderr}");
    assert!(stderr.to_lowercase().contains("sum"), "{stderr}");
}

#[test]
fn json_output_tags_infinities() {
    let (stdout, _, code) = run(&[
        "dist",
        &data("metric_disconnected.json"),
        &data("p_e1.json"),
        &data("p_e3.json"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"tag\": \"inf\""), "{stdout}");
    let value: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(value["command"], "dist");
}

#[test]
fn help_and_version_exit_cleanly() {
    let (stdout, _, code) = run(&["--help"]);
    assert_eq!(code, 0);
    for command in ["dist", "pythagoras", "transport", "surface", "verify"] {
        assert!(stdout.contains(command), "{stdout}");
    }
    let (stdout, _, code) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("specdist"), "{stdout}");
}
