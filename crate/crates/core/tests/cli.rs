use std::process::{Command, Output};

use lieb_core::report::{Outcome, RunReport};

fn lieb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn constants_example_exits_zero() {
    let out = lieb(&["constants", "--n", "4", "--lambda", "2"]);
    assert_eq!(code(&out), 0);
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.subcommand, "constants");
    assert!(report.timestamp.is_some());
    let c = report.results[1]["value"].as_f64().unwrap();
    let want = 1.0 / (8.0 * std::f64::consts::PI.powi(3));
    assert!(((c - want) / want).abs() < 1e-12);
}

#[test]
fn singular_solution_is_verified() {
    let out = lieb(&["verify-solution", "--which", "singular", "--n", "1", "--lambda", "0.5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.verdict, Outcome::Verified);
}

#[test]
fn usage_errors_exit_two() {
    let out = lieb(&["verify-solution", "--n", "1", "--lambda", "2"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    assert_eq!(
        code(&lieb(&[
            "solve", "--n", "1", "--lambda", "0.5", "--a", "1", "--b", "-1"
        ])),
        2
    );
    assert_eq!(
        code(&lieb(&["identity", "--n", "1", "--lambda", "0.5", "--alpha", "1,1"])),
        2
    );
    assert_eq!(
        code(&lieb(&[
            "identity",
            "--n",
            "1",
            "--lambda",
            "0.5",
            "--kind",
            "composite"
        ])),
        2
    );
    assert_eq!(code(&lieb(&[])), 2);
    assert_eq!(code(&lieb(&["--help"])), 0);
}

#[test]
fn not_applicable_only_exits_three() {
    let out = lieb(&[
        "identity", "--n", "1", "--lambda", "0.5", "--f", "singular", "--g", "singular", "--alpha", "2",
    ]);
    assert_eq!(code(&out), 3);
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.verdict, Outcome::NotApplicable);
}

#[test]
fn unbounded_norm_exits_one() {
    let out = lieb(&["regularity", "--n", "1", "--lambda", "0.5", "--which", "singular"]);
    assert_eq!(code(&out), 1);
    let out = lieb(&["regularity", "--n", "1", "--lambda", "0.5", "--which", "lieb"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: [&[&str]; 5] = [
        &["constants", "--n", "3", "--lambda", "1"],
        &["riesz", "--n", "3", "--lambda", "2", "--radii", "0,1,3"],
        &[
            "identity",
            "--n",
            "1",
            "--lambda",
            "0.25",
            "--kind",
            "composite",
            "--left-form",
            "d1 + d11",
        ],
        &["corollary", "--n", "1", "--lambda", "0.75"],
        &["scan", "--n", "1", "--lambda", "0.5", "--which", "singular"],
    ];
    for args in cases {
        let mut args = args.to_vec();
        args.push("--no-timestamp");
        let a = lieb(&args);
        let b = lieb(&args);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn report_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let path = path.to_str().unwrap();
    let out = lieb(&[
        "verify-solution",
        "--n",
        "3",
        "--lambda",
        "1",
        "--no-timestamp",
        "--out",
        path,
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(lieb_core::report::to_json(&report).unwrap(), text);
    let lieb_result = &report.results[1];
    assert_eq!(lieb_result["solution"], "lieb");
    assert_eq!(lieb_result["verdict"], "Verified");
}

#[test]
fn config_file_sits_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# defaults\nn = 3\nlambda = 1\nrel_tol = 1e-10\nradii = 1,2\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = lieb(&["constants", "--config", cfg, "--lambda", "2", "--no-timestamp"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.params.n, 3);
    assert_eq!(report.params.lambda, 2.0);
    assert_eq!(report.quadrature.rel_tol, 1e-10);

    std::fs::write(dir.path().join("bad.cfg"), "n = 3\nlambda = 1\nwidth = 4\n").unwrap();
    let bad = dir.path().join("bad.cfg");
    assert_eq!(code(&lieb(&["constants", "--config", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&lieb(&["constants", "--config", "/nonexistent/run.cfg"])), 2);
}

#[test]
fn solve_reports_the_trace() {
    let out = lieb(&[
        "solve",
        "--n",
        "1",
        "--lambda",
        "0.5",
        "--grid-size",
        "40",
        "--no-timestamp",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    let result = &report.results[0];
    assert_eq!(result["converged"], true);
    assert_eq!(result["nodes"].as_array().unwrap().len(), 41);
    let out = lieb(&[
        "solve",
        "--n",
        "1",
        "--lambda",
        "0.5",
        "--grid-size",
        "40",
        "--max-iters",
        "3",
    ]);
    assert_eq!(code(&out), 1);
}
