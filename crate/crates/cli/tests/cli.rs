//! Exit-code, reproducibility, and formatting contract of the binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use entangle_cli::report::ReportFile;
use entangle_cli::statefile::StateFile;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_entangle"));
    cmd.env_remove("ENTANGLE_SEED");
    cmd
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

const BELL: &str = r#"{"format_version":1,"dims":[2,2],
"amplitudes":[[0.7071067811865476,0.0],[0.0,0.0],[0.0,0.0],[0.7071067811865476,0.0]]}"#;

const PRODUCT: &str = r#"{"format_version":1,"dims":[2,2],
"amplitudes":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#;

#[test]
fn happy_path_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(dir.path(), "bell.json", BELL);
    let output = bin().arg("measure").arg(&state).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
}

#[test]
fn malformed_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, contents) in [
        ("garbage.json", "not json at all"),
        ("short.json", r#"{"format_version":1,"dims":[2,2],"amplitudes":[[1.0,0.0]]}"#),
        ("zero-dim.json", r#"{"format_version":1,"dims":[0,2],"amplitudes":[]}"#),
        (
            "bad-version.json",
            r#"{"format_version":9,"dims":[2,2],
               "amplitudes":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#,
        ),
        (
            "nan.json",
            r#"{"format_version":1,"dims":[2,2],
               "amplitudes":[[1e999,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#,
        ),
    ] {
        let state = write_file(dir.path(), name, contents);
        let output = bin().arg("measure").arg(&state).output().unwrap();
        assert_eq!(output.status.code(), Some(2), "{name}: {}", stderr_of(&output));
    }
}

#[test]
fn bad_norm_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(
        dir.path(),
        "short-norm.json",
        r#"{"format_version":1,"dims":[2,2],
           "amplitudes":[[0.9,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#,
    );
    let output = bin().arg("measure").arg(&state).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr_of(&output).contains("norm"));
}

#[test]
fn single_level_side_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(
        dir.path(),
        "one-by-three.json",
        r#"{"format_version":1,"dims":[1,3],
           "amplitudes":[[1.0,0.0],[0.0,0.0],[0.0,0.0]]}"#,
    );
    let output = bin().arg("measure").arg(&state).output().unwrap();
    assert_eq!(output.status.code(), Some(4));
    assert!(stderr_of(&output).contains("undefined"));
}

#[test]
fn unwritable_output_exits_five() {
    let output = bin()
        .args(["random", "--dim-a", "2", "--dim-b", "2", "--seed", "1"])
        .args(["--out", "/this/path/does/not/exist.json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(5));
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(dir.path(), "bell.json", BELL);
    let output = bin()
        .arg("measure")
        .arg(&state)
        .args(["--out", "/this/path/does/not/exist.json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(5));
}

#[test]
fn verification_failure_exits_one() {
    let output = bin()
        .args(["verify", "--suite", "equivalence", "--trials", "50", "--seed", "3"])
        .args(["--tolerance", "1e-17"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout_of(&output).contains("FAIL"));
}

#[test]
fn mild_norm_drift_warns_and_renormalizes() {
    let dir = tempfile::tempdir().unwrap();
    // Norm off by ~5e-9: inside the acceptance window, beyond the silent one.
    let state = write_file(
        dir.path(),
        "drift.json",
        r#"{"format_version":1,"dims":[2,2],
           "amplitudes":[[1.000000005,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#,
    );
    let output = bin().arg("measure").arg(&state).arg("--format").arg("json").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(stderr_of(&output).contains("renormalizing"));
    let report: ReportFile = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert!(report.e_closed_form.abs() < 1e-9, "renormalized product state stays separable");
    assert!((report.lambdas[0] - 1.0).abs() < 1e-12);
}

#[test]
fn no_timestamp_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(dir.path(), "bell.json", BELL);
    let run = || {
        let output = bin()
            .arg("measure")
            .arg(&state)
            .args(["--format", "json", "--no-timestamp"])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0));
        output.stdout
    };
    let first = run();
    std::thread::sleep(std::time::Duration::from_millis(5));
    let second = run();
    assert_eq!(first, second);
    let report: ReportFile = serde_json::from_slice(&first).unwrap();
    assert!(report.timestamp.is_none());
    assert!(report.input_checksum.starts_with("sha256:"));

    let with_ts = bin().arg("measure").arg(&state).args(["--format", "json"]).output().unwrap();
    let report: ReportFile = serde_json::from_slice(&with_ts.stdout).unwrap();
    assert!(report.timestamp.is_some());
}

#[test]
fn seed_env_var_is_the_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let flag_path = dir.path().join("flag.json");
    let env_path = dir.path().join("env.json");
    let default_path = dir.path().join("default.json");
    let status = bin()
        .args(["random", "--dim-a", "3", "--dim-b", "2", "--seed", "11"])
        .arg("--out")
        .arg(&flag_path)
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin()
        .env("ENTANGLE_SEED", "11")
        .args(["random", "--dim-a", "3", "--dim-b", "2"])
        .arg("--out")
        .arg(&env_path)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read(&flag_path).unwrap(), std::fs::read(&env_path).unwrap());

    // An explicit flag wins over the environment.
    let flag_wins = dir.path().join("flag-wins.json");
    let status = bin()
        .env("ENTANGLE_SEED", "999")
        .args(["random", "--dim-a", "3", "--dim-b", "2", "--seed", "11"])
        .arg("--out")
        .arg(&flag_wins)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read(&flag_path).unwrap(), std::fs::read(&flag_wins).unwrap());

    // Missing both falls back to seed 0.
    let status = bin()
        .args(["random", "--dim-a", "3", "--dim-b", "2"])
        .arg("--out")
        .arg(&default_path)
        .status()
        .unwrap();
    assert!(status.success());
    let zero_path = dir.path().join("zero.json");
    let status = bin()
        .args(["random", "--dim-a", "3", "--dim-b", "2", "--seed", "0"])
        .arg("--out")
        .arg(&zero_path)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read(&default_path).unwrap(), std::fs::read(&zero_path).unwrap());

    let bad = bin()
        .env("ENTANGLE_SEED", "not-a-number")
        .args(["random", "--dim-a", "2", "--dim-b", "2"])
        .arg("--out")
        .arg(dir.path().join("bad.json"))
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn partition_flag_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let bell = write_file(dir.path(), "bell.json", BELL);
    let ghz = write_file(
        dir.path(),
        "ghz.json",
        r#"{"format_version":1,"dims":[2,2,2],
           "amplitudes":[[0.7071067811865476,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0],
                         [0.0,0.0],[0.0,0.0],[0.0,0.0],[0.7071067811865476,0.0]]}"#,
    );
    for args in [
        vec!["measure", bell.to_str().unwrap(), "--part-a", "1"],
        vec!["measure", ghz.to_str().unwrap()],
        vec!["measure", ghz.to_str().unwrap(), "--part-a", "0"],
        vec!["measure", ghz.to_str().unwrap(), "--part-a", "4"],
        vec!["measure", ghz.to_str().unwrap(), "--part-a", "1,1"],
        vec!["measure", ghz.to_str().unwrap(), "--part-a", "1,2,3"],
        vec!["measure", ghz.to_str().unwrap(), "--part-a", "x"],
        vec!["schmidt", ghz.to_str().unwrap()],
    ] {
        let output = bin().args(&args).output().unwrap();
        assert_eq!(output.status.code(), Some(2), "args: {args:?}");
    }
    let output = bin()
        .args(["measure", ghz.to_str().unwrap(), "--part-a", "1", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report: ReportFile = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report.part_a, Some(vec![1]));
    assert!((report.e_closed_form - 1.0).abs() < 1e-12);
}

#[test]
fn schmidt_prints_descending_spectrum_and_bases() {
    let dir = tempfile::tempdir().unwrap();
    // Amplitude matrix diag(0.6, 0.8): weights must come out as 0.64, 0.36.
    let state = write_file(
        dir.path(),
        "diag.json",
        r#"{"format_version":1,"dims":[2,2],
           "amplitudes":[[0.6,0.0],[0.0,0.0],[0.0,0.0],[0.8,0.0]]}"#,
    );
    let output = bin().arg("schmidt").arg(&state).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    assert!(text.contains("schmidt rank: 2"), "{text}");
    assert!(text.contains("lambda: 6.4000000000"), "{text}");
    assert!(text.contains(", 3.6000000000"), "{text}");
    assert!(!text.contains("basis A"));

    let output = bin().arg("schmidt").arg(&state).arg("--bases").output().unwrap();
    let text = stdout_of(&output);
    assert!(text.contains("basis A"));
    assert!(text.contains("basis B"));
}

#[test]
fn random_files_round_trip_without_loss() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    let status = bin()
        .args(["random", "--dim-a", "3", "--dim-b", "5", "--seed", "123"])
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let (loaded, _raw) = StateFile::load(&path).unwrap();
    assert_eq!(loaded.dims, vec![3, 5]);
    let expected = entangle_core::random_pure_state(3, 5, 123);
    for (pair, z) in loaded.amplitudes.iter().zip(expected.amplitudes().iter()) {
        assert_eq!(pair[0].to_bits(), z.re.to_bits());
        assert_eq!(pair[1].to_bits(), z.im.to_bits());
    }
    // Saving the parsed struct again reproduces the file byte for byte.
    let resaved = dir.path().join("resaved.json");
    loaded.save(&resaved).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&resaved).unwrap());
}

#[test]
fn product_state_reports_all_zero_measures() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(dir.path(), "product.json", PRODUCT);
    let output =
        bin().arg("measure").arg(&state).args(["--format", "json", "--no-timestamp"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report: ReportFile = serde_json::from_slice(&output.stdout).unwrap();
    for value in [
        report.e_probability_sum,
        report.e_closed_form,
        report.entropy_of_entanglement,
        report.two_entropy,
        report.renyi2,
    ] {
        assert!(value.abs() <= 1e-9, "expected separable zeros, got {value}");
    }
    assert_eq!(report.schmidt_rank, 1);
}

#[test]
fn bell_file_reports_maximal_values() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_file(dir.path(), "bell.json", BELL);
    let output =
        bin().arg("measure").arg(&state).args(["--format", "json", "--no-timestamp"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let report: ReportFile = serde_json::from_slice(&output.stdout).unwrap();
    assert!((report.e_closed_form - 1.0).abs() < 1e-12);
    assert!((report.e_probability_sum - 1.0).abs() < 1e-12);
    assert!((report.entropy_of_entanglement - std::f64::consts::LN_2).abs() < 1e-12);
    assert_eq!(report.dims, vec![2, 2]);
}
