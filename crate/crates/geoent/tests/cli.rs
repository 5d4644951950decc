//! End-to-end tests of the `geoent` binary: output values, file formats,
//! determinism, and exit codes.

use std::process::Command;

fn geoent() -> Command {
    Command::new(env!("CARGO_BIN_EXE_geoent"))
}

fn run_ok(args: &[&str]) -> String {
    let out = geoent().args(args).output().expect("spawn geoent");
    assert!(
        out.status.success(),
        "geoent {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    geoent()
        .args(args)
        .output()
        .expect("spawn geoent")
        .status
        .code()
        .unwrap()
}

fn json_field(json: &str, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key}"))
}

#[test]
fn eval_w_state() {
    let out = run_ok(&[
        "eval",
        "--g",
        "0",
        "--t",
        "0.57735026918962576",
        "--h",
        "0",
        "--gamma",
        "0",
        "--json",
    ]);
    assert!((json_field(&out, "p_max") - 4.0 / 9.0).abs() < 1e-12);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["branch"], "plus");
}

#[test]
fn eval_uv_product_state() {
    let out = run_ok(&["eval", "--u", "1.5707963267948966", "--v", "0", "--json"]);
    assert!((json_field(&out, "p_max") - 1.0).abs() < 1e-12);
    assert!(json_field(&out, "geometric_measure").abs() < 1e-12);
}

#[test]
fn eval_table_two_value() {
    let out = run_ok(&[
        "eval",
        "--g",
        "0",
        "--t",
        "0.5",
        "--h",
        "0.5",
        "--gamma",
        "1.5707963267948966",
        "--json",
    ]);
    assert!((json_field(&out, "p_max") - 0.8).abs() < 1e-12);
}

#[test]
fn eval_json_state_roundtrips() {
    let out = run_ok(&[
        "eval",
        "--g",
        "0.31",
        "--t",
        "0.42",
        "--h",
        "0.45",
        "--gamma-pi",
        "0.2",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let state_json = v["state"].to_string();
    let state = geoent::qstate::SymmetricState::from_json(&state_json).unwrap();
    let expected =
        geoent::qstate::SymmetricState::from_params(0.31, 0.42, 0.45, 0.2 * std::f64::consts::PI)
            .unwrap();
    assert_eq!(state.g(), expected.g());
    assert_eq!(state.t(), expected.t());
    assert_eq!(state.h(), expected.h());
    assert_eq!(state.gamma(), expected.gamma());
}

#[test]
fn domains_counts() {
    let out = run_ok(&["domains", "--gamma", "1.5707963267948966", "--grid", "200"]);
    assert!(out.contains("domains: 3"), "{out}");
    let out = run_ok(&["domains", "--gamma", "0", "--grid", "200"]);
    assert!(out.contains("domains: 2"), "{out}");
}

#[test]
fn sweep_csv_and_determinism() {
    let dir = std::env::temp_dir().join(format!("geoent-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    for path in [&a, &b] {
        run_ok(&[
            "sweep",
            "--gamma",
            "0.7853981633974483",
            "--grid",
            "40",
            "-o",
            path.to_str().unwrap(),
        ]);
    }
    let ca = std::fs::read(&a).unwrap();
    let cb = std::fs::read(&b).unwrap();
    assert_eq!(ca, cb, "sweep output must be byte-identical");
    let text = String::from_utf8(ca).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "u,v,g,t,h,gamma,p_max,G,branch,D1,C2,C3,boundary"
    );
    assert_eq!(text.lines().count(), 1601);

    // One record per grid cell at the documented default-style call.
    let c = dir.join("c.csv");
    run_ok(&[
        "sweep",
        "--gamma",
        "0.7853981633974483",
        "--grid",
        "100",
        "-o",
        c.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&c).unwrap();
    assert_eq!(text.lines().count(), 10_001);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn oracle_subcommand_reports() {
    let out = run_ok(&[
        "oracle",
        "--g",
        "0.5",
        "--t",
        "0.5",
        "--h",
        "0",
        "--restarts",
        "20",
        "--seed",
        "7",
    ]);
    assert!(out.contains("seed: 7"));
    assert!(out.contains("oracle P_max"));
    assert!(out.contains("|oracle - analytic|"));
}

#[test]
fn nearest_subcommand_reports() {
    let out = run_ok(&["nearest", "--g", "0.5", "--t", "0.3", "--h", "0.6"]);
    assert!(out.contains("mu0^2"));
    assert!(out.contains("reconstruction residual"));
}

#[test]
fn verify_quick_subset() {
    let out = geoent()
        .args([
            "verify",
            "--samples",
            "10",
            "--only",
            "w-state",
            "--seed",
            "7",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("seed: 7"));
    assert!(text.contains("PASS"));
}

#[test]
fn exit_codes() {
    // Usage errors: 3.
    assert_eq!(exit_code(&["eval", "--g", "0.5"]), 3);
    assert_eq!(exit_code(&["verify", "--samples", "0"]), 3);
    assert_eq!(exit_code(&["verify", "--only", "no-such-check"]), 3);
    assert_eq!(exit_code(&["--bogus-flag"]), 3);
    // Unwritable output: 2.
    assert_eq!(
        exit_code(&[
            "sweep",
            "--gamma",
            "0",
            "--grid",
            "2",
            "-o",
            "/nonexistent-dir/out.csv"
        ]),
        2
    );
    // Degenerate request: 1.
    assert_eq!(
        exit_code(&["nearest", "--g", "0.5", "--t", "0.5", "--h", "0"]),
        1
    );
    // Help is not an error.
    assert_eq!(exit_code(&["--help"]), 0);
}

#[test]
fn output_independent_of_thread_cap() {
    let csv = |threads: &str| {
        let dir =
            std::env::temp_dir().join(format!("geoent-threads-{}-{threads}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        let out = geoent()
            .env("GEOENT_THREADS", threads)
            .args([
                "sweep",
                "--gamma-pi",
                "0.3",
                "--grid",
                "24",
                "-o",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        let bytes = std::fs::read(&path).unwrap();
        std::fs::remove_dir_all(&dir).ok();
        bytes
    };
    assert_eq!(csv("1"), csv("2"));
}

#[test]
fn eval_reports_nearest_product_state() {
    let out = run_ok(&[
        "eval",
        "--g",
        "0.3",
        "--t",
        "0.45",
        "--h",
        "0.5",
        "--gamma-pi",
        "0.15",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let p_max = v["p_max"].as_f64().unwrap();
    let factors = v["nearest_product"].as_array().unwrap();
    assert_eq!(factors.len(), 3);
    // Recompute the overlap of the reported product state with the state.
    let amp = |f: &serde_json::Value, i: usize| {
        num_complex::Complex64::new(f[2 * i].as_f64().unwrap(), f[2 * i + 1].as_f64().unwrap())
    };
    let qs: Vec<geoent::qstate::Qubit> = factors
        .iter()
        .map(|f| geoent::qstate::Qubit::new(amp(f, 0), amp(f, 1)).unwrap())
        .collect();
    let state = geoent::qstate::SymmetricState::from_json(&v["state"].to_string()).unwrap();
    let triple = geoent::oracle::ProductTriple::new(qs[0], qs[1], qs[2]);
    let overlap = geoent::oracle::overlap(&triple, &state.state_vector().general());
    assert!((overlap - p_max).abs() < 1e-10, "{overlap} vs {p_max}");
}

#[test]
fn gamma_pi_flag_matches_radians() {
    let a = run_ok(&[
        "eval",
        "--g",
        "0.5",
        "--t",
        "0.4",
        "--h",
        "0.45",
        "--gamma-pi",
        "0.25",
        "--json",
    ]);
    let b = run_ok(&[
        "eval",
        "--g",
        "0.5",
        "--t",
        "0.4",
        "--h",
        "0.45",
        "--gamma",
        "0.7853981633974483",
        "--json",
    ]);
    assert!((json_field(&a, "p_max") - json_field(&b, "p_max")).abs() < 1e-15);
}
