//! End-to-end behavior of the binary: exit codes, format wiring, cache
//! lifecycle, and the JSON round-trip guarantee.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spheremass"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

#[test]
fn usage_errors_exit_two() {
    // Unknown flag value (clap) and invalid flag combination (ours).
    let unknown = bin().args(["mass", "--manifold", "torus"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    let fast_json = bin()
        .args(["mass", "--mode", "fast", "--format", "json", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(fast_json.status.code(), Some(2));
    let fast_t0 = bin().args(["t0", "--mode", "fast", "--n", "2"]).output().unwrap();
    assert_eq!(fast_t0.status.code(), Some(2));
    let bad_suite = bin().args(["verify", "--suite", "nonsense"]).output().unwrap();
    assert_eq!(bad_suite.status.code(), Some(2));
    let zero_n = bin().args(["mass", "--n", "0"]).output().unwrap();
    assert_eq!(zero_n.status.code(), Some(2));
}

#[test]
fn verify_hand_suite_passes() {
    let out = run_ok(&["verify", "--suite", "hand"]);
    assert!(out.contains("verification: all suites pass"), "{out}");
}

#[test]
fn csv_schema() {
    let out = run_ok(&["mass", "--manifold", "all", "--n", "2", "--digits", "8", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "manifold,N,sum_a_num,sum_a_den,sum_b_num,sum_b_den,bound_num,bound_den,lo,hi"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("s2xs2,2,"));
    assert!(rows[1].starts_with("g24,2,"));
    assert!(rows[2].starts_with("rp2xrp2,2,"));
    for row in rows {
        assert_eq!(row.split(',').count(), 10);
    }
}

#[test]
fn json_round_trip_rederives_enclosures() {
    let out = run_ok(&["mass", "--manifold", "g24", "--n", "3", "--digits", "12", "--format", "json"]);
    let parsed: spheremass_cli::report::MassJson = serde_json::from_str(&out).expect("json parses");
    let (mass, t0, t0_double) = spheremass_cli::report::rederive_intervals(&parsed).expect("rederive");
    assert_eq!(mass, parsed.interval);
    assert_eq!(t0, parsed.t0);
    assert_eq!(t0_double, parsed.t0_double);
}

#[test]
fn convergence_rejects_empty_and_reports_shrinking_widths() {
    let empty = bin().args(["convergence", "--manifold", "s2xs2", "--n-list", ""]).output().unwrap();
    assert_eq!(empty.status.code(), Some(2));

    let out = run_ok(&[
        "convergence",
        "--manifold",
        "s2xs2",
        "--n-list",
        "1,2,3,4,5",
        "--digits",
        "8",
        "--format",
        "csv",
    ]);
    let widths: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|row| {
            let cols: Vec<&str> = row.split(',').collect();
            cols[9].parse::<f64>().unwrap() - cols[8].parse::<f64>().unwrap()
        })
        .collect();
    assert_eq!(widths.len(), 5);
    for pair in widths.windows(2) {
        assert!(pair[1] < pair[0], "widths not strictly decreasing: {widths:?}");
    }
}

#[test]
fn cache_round_trip_and_corruption_handling() {
    let dir = tempfile::tempdir().unwrap();
    let dir_arg = dir.path().to_str().unwrap();

    let cold = run_ok(&[
        "mass", "--manifold", "s2xs2", "--n", "6", "--digits", "10", "--format", "json",
        "--cache-dir", dir_arg,
    ]);
    let cache_file = dir.path().join("coefficients-v1.json");
    assert!(cache_file.exists(), "cache file written");

    let warm = run_ok(&[
        "mass", "--manifold", "s2xs2", "--n", "6", "--digits", "10", "--format", "json",
        "--cache-dir", dir_arg,
    ]);
    assert_eq!(cold, warm, "warm-cache output differs from cold run");

    // Truncated file: warning + recompute, never a wrong answer.
    let text = std::fs::read_to_string(&cache_file).unwrap();
    std::fs::write(&cache_file, &text[..text.len() / 2]).unwrap();
    let recovered = run_ok(&[
        "mass", "--manifold", "s2xs2", "--n", "6", "--digits", "10", "--format", "json",
        "--cache-dir", dir_arg,
    ]);
    assert_eq!(cold, recovered, "output after cache corruption differs");

    // Version bump: rejected, recomputed.
    let text = std::fs::read_to_string(&cache_file).unwrap();
    std::fs::write(&cache_file, text.replace("\"version\":1", "\"version\":99")).unwrap();
    let out = bin()
        .args([
            "mass", "--manifold", "s2xs2", "--n", "6", "--digits", "10", "--format", "json",
            "--cache-dir", dir_arg,
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("cache: ignoring"), "no warning on version mismatch: {stderr}");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), cold);
}

#[test]
fn cache_env_var_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["mass", "--manifold", "s2xs2", "--n", "2", "--format", "csv"])
        .env("SPHEREMASS_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("coefficients-v1.json").exists());
}

#[test]
fn cache_warm_and_info() {
    let dir = tempfile::tempdir().unwrap();
    let dir_arg = dir.path().to_str().unwrap();
    let out = run_ok(&["cache", "warm", "--n", "4", "--cache-dir", dir_arg]);
    assert!(out.contains("cache warmed to N = 4"));
    let info = run_ok(&["cache", "info", "--cache-dir", dir_arg]);
    assert!(info.contains("version 1"), "{info}");
    // 15 moment pairs and 15 mode pairs with indices <= 4 (p <= q).
    assert!(info.contains("15 moment entries"), "{info}");
    assert!(info.contains("15 mode entries"), "{info}");
    run_ok(&["cache", "clear", "--cache-dir", dir_arg]);
    assert!(!dir.path().join("coefficients-v1.json").exists());
}

#[test]
fn text_output_carries_exact_form_and_enclosure() {
    let out = run_ok(&["mass", "--manifold", "s2xs2", "--n", "1", "--digits", "6"]);
    assert!(out.contains("4777/1260"), "{out}");
    assert!(out.contains("-208/45"), "{out}");
    assert!(out.contains("mass interval: 0.494"), "{out}");
}
