//! End-to-end CLI checks through the compiled binary.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poisson-rd"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn cover_bound_matches_the_exact_count() {
    let out = run(&["cover-bound", "--shape", "cube", "--n", "3", "--d", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["count"], "8");
    assert_eq!(v["rate_per_point"], 1.0);

    // Non-dyadic distortion stays exact.
    let out = run(&["cover-bound", "--shape", "order-simplex", "--n", "2", "--d", "1/4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["count"], "16");
}

#[test]
fn group_order_and_semidirect() {
    let out = run(&["group", "order", "--family", "o", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).trim(), "48");

    let out = run(&["group", "verify-semidirect", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["all"], true);

    let out = run(&[
        "group",
        "isomorphic",
        "--family-a",
        "h",
        "--n-a",
        "3",
        "--family-b",
        "o",
        "--n-b",
        "3",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["isomorphic"], false);
}

#[test]
fn polytope_verification() {
    let out = run(&["polytope", "sym-order", "--family", "cube", "--n", "3"]);
    assert_eq!(stdout_str(&out).trim(), "48");

    let out = run(&["polytope", "verify", "--family", "octahedron", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["sym_order"], 48);

    let out = run(&["polytope", "hamming-check", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["pass"], true);

    let out = run(&["polytope", "graph", "--family", "octahedron", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["m"], 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn symmetrize_trace_for_n2() {
    let out = run(&["symmetrize", "--n", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["terminated"], true);
    assert_eq!(v["expansions"], 2);
    assert_eq!(v["final_orders"][0], 8);
    assert_eq!(v["final_orders"][1], 8);
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let a = run(&["simulate", "--lambda", "5", "--t", "2", "--seed", "9"]);
    let b = run(&["simulate", "--lambda", "5", "--t", "2", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "identical config + seed must be byte-identical");
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&a)).unwrap();
    assert_eq!(v["T"], 2.0);

    let c = run(&["simulate", "--lambda", "5", "--t", "2", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn distort_reads_files_and_reports_inf() {
    let dir = std::env::temp_dir().join(format!("prd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pattern = dir.join("t.json");
    let codeword = dir.join("c.json");
    std::fs::write(&pattern, r#"{"T":1.0,"timings":[0.1,0.5]}"#).unwrap();
    std::fs::write(&codeword, r#"{"T":1.0,"cells":[[0.0,0.6]]}"#).unwrap();
    let out = run(&[
        "distort",
        "--measure",
        "pc",
        "--pattern",
        pattern.to_str().unwrap(),
        "--codeword",
        codeword.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["value"], 0.6);

    std::fs::write(&pattern, r#"{"T":1.0,"timings":[0.1,0.7]}"#).unwrap();
    let out = run(&[
        "distort",
        "--measure",
        "pc",
        "--pattern",
        pattern.to_str().unwrap(),
        "--codeword",
        codeword.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["value"], "inf");

    std::fs::write(&codeword, r#"{"T":1.0,"timings":[0.2,0.5]}"#).unwrap();
    std::fs::write(&pattern, r#"{"T":1.0,"timings":[0.3,0.6]}"#).unwrap();
    let out = run(&[
        "distort",
        "--measure",
        "q",
        "--pattern",
        pattern.to_str().unwrap(),
        "--codeword",
        codeword.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.2).abs() < 1e-12);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn rd_curve_emits_csv_with_header() {
    let out = run(&[
        "rd-curve",
        "--measure",
        "point-covering",
        "--n",
        "8",
        "--d-grid",
        "1/4,1/2",
        "--samples",
        "50",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "D,R_theory,R_measured,D_measured,method,n,lambda,seed"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn exit_codes() {
    // Usage error from clap: exit code 2.
    let out = run(&["cover-bound", "--shape", "pyramid", "--n", "3", "--d", "0.5"]);
    assert_eq!(out.status.code(), Some(2));

    // Domain error: exit code 1 with a JSON error object on stderr.
    let out = run(&["cover-bound", "--shape", "cube", "--n", "3", "--d", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert!(err["error"].is_string());

    // Missing subcommand: usage error.
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ba_point_at_a_coarse_grid() {
    // Keep the CLI-side BA cheap: coarse grid, single slope.
    let out = run(&[
        "ba",
        "--source",
        "laplacian",
        "--grid-step",
        "0.1",
        "--slope",
        "2.0",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(v["R"].as_f64().unwrap() > 0.5);
    assert!(v["D"].as_f64().unwrap() > 0.1);
    assert!(v["iters"].as_u64().unwrap() > 0);
}
