use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nfisac(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfisac"))
        .args(args)
        .current_dir(cwd)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

const SWEEP: &str = r#"
[scenario]
cu_count = 2
eve_count = 1
target_count = 1

[sweep]
variable = "P0_dbm"
values = [20.0, 30.0]

[run]
schemes = ["srocr", "sdr"]
seeds = [0, 1]
mc_samples = 200
"#;

#[test]
fn sweep_output_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sweep.toml"), SWEEP).unwrap();
    fs::write(dir.path().join("sweep2.toml"), format!("{SWEEP}threads = 1\n")).unwrap();
    for (cfg, out) in [("sweep.toml", "a"), ("sweep.toml", "b"), ("sweep2.toml", "c")] {
        let o = nfisac(&["sweep", "--config", cfg, "--out", out], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let read = |d: &str| fs::read(dir.path().join(d).join("results.csv")).unwrap();
    let a = read("a");
    assert_eq!(a, read("b"));
    assert_eq!(a, read("c"));
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(7) == Some("0.000000000e+00")));
}

#[test]
fn solve_verify_beampattern_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = nfisac(&["solve", "--seed", "2", "--out", "s", "--mc-samples", "200"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(dir.path().join("s/report.txt")).unwrap();
    assert!(report.contains("pass = true"));
    let trace = fs::read_to_string(dir.path().join("s/trace.csv")).unwrap();
    assert!(trace.starts_with("iteration,objective_w,status,solve_s,"));

    let o = nfisac(&["verify", "--solution", "s/solution.toml", "--mc-samples", "200"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("pass = true"));

    // Same design checked against a different seed's scenario.
    let o = nfisac(&["verify", "--solution", "s/solution.toml", "--seed", "3", "--mc-samples", "200"], dir.path());
    assert_eq!(o.status.code(), Some(1));

    let o = nfisac(
        &["beampattern", "--solution", "s/solution.toml", "--out", "s", "--range-count", "5", "--angle-count", "7"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let grid = fs::read_to_string(dir.path().join("s/beampattern.csv")).unwrap();
    assert_eq!(grid.lines().count(), 1 + 5);
    assert!(grid.lines().all(|l| l.split(',').count() == 1 + 7));
    let peak = fs::read_to_string(dir.path().join("s/beampattern.csv.peak")).unwrap();
    assert!(peak.starts_with("peak range_m = "));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.toml"), "[scenario]\nantennas = 0\n").unwrap();
    fs::write(dir.path().join("typo.toml"), "[scenario]\nantenas = 8\n").unwrap();
    assert_eq!(nfisac(&["solve", "--config", "bad.toml"], dir.path()).status.code(), Some(4));
    assert_eq!(nfisac(&["solve", "--config", "typo.toml"], dir.path()).status.code(), Some(4));
    assert_eq!(nfisac(&["solve", "--config", "missing.toml"], dir.path()).status.code(), Some(4));
    assert_eq!(nfisac(&["solve", "--scheme", "nope"], dir.path()).status.code(), Some(4));
    assert_eq!(nfisac(&["sweep"], dir.path()).status.code(), Some(4));

    // A 60 dB SINR target cannot be met with 1 W.
    fs::write(dir.path().join("hard.toml"), "[scenario]\nsinr_threshold_db = 60.0\n").unwrap();
    assert_eq!(nfisac(&["solve", "--config", "hard.toml"], dir.path()).status.code(), Some(2));
}
