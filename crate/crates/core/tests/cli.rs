//! End-to-end tests of the `blockmeans` binary: flag validation, exit
//! codes, file outputs, and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn blockmeans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockmeans"))
        .args(args)
        .output()
        .expect("failed to spawn blockmeans")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process terminated by signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn gen(path: &Path, width: u32, height: u32, seed: u64) {
    let out = blockmeans(&[
        "gen",
        "--width",
        &width.to_string(),
        "--height",
        &height.to_string(),
        "--channels",
        "3",
        "--regions",
        "4",
        "--noise",
        "8",
        "--seed",
        &seed.to_string(),
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "gen failed: {:?}", out);
}

#[test]
fn gen_writes_deterministic_p6() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    gen(&a, 64, 64, 42);
    gen(&b, 64, 64, 42);
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(bytes_a.starts_with(b"P6\n64 64\n255\n"));
    assert_eq!(bytes_a, bytes_b);
}

#[test]
fn gen_rejects_two_channels_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = blockmeans(&[
        "gen",
        "--width",
        "8",
        "--height",
        "8",
        "--channels",
        "2",
        "--regions",
        "1",
        "--noise",
        "0",
        "--output",
        dir.path().join("x.ppm").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("--channels"), "stderr was: {err}");
}

#[test]
fn cluster_whole_mode_writes_matching_dims_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ppm");
    let output = dir.path().join("out.ppm");
    gen(&input, 32, 24, 7);
    let out = blockmeans(&[
        "cluster",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--k",
        "2",
        "--mode",
        "whole",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let bytes = std::fs::read(&output).unwrap();
    assert!(bytes.starts_with(b"P6\n32 24\n255\n"));
    let line = stdout(&out);
    assert!(line.starts_with("mode=whole strategy=square k=2 workers="), "{line}");
    assert!(line.contains(" wall_ms="), "{line}");
}

#[test]
fn cluster_is_deterministic_for_equal_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ppm");
    gen(&input, 40, 40, 3);
    let out_a = dir.path().join("a.ppm");
    let out_b = dir.path().join("b.ppm");
    for (path, workers) in [(&out_a, "2"), (&out_b, "7")] {
        let out = blockmeans(&[
            "cluster",
            "--input",
            input.to_str().unwrap(),
            "--output",
            path.to_str().unwrap(),
            "--k",
            "4",
            "--strategy",
            "row",
            "--extent",
            "8",
            "--workers",
            workers,
            "--seed",
            "11",
        ]);
        assert_eq!(exit_code(&out), 0);
    }
    // Same seed, different worker counts: byte-identical cluster maps.
    assert_eq!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());
}

#[test]
fn cluster_rejects_zero_k_naming_the_flag() {
    let out = blockmeans(&[
        "cluster", "--input", "x.ppm", "--output", "y.ppm", "--k", "0",
    ]);
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("--k"), "stderr was: {err}");
}

#[test]
fn cluster_missing_input_is_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = blockmeans(&[
        "cluster",
        "--input",
        dir.path().join("absent.ppm").to_str().unwrap(),
        "--output",
        dir.path().join("out.ppm").to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn bench_default_matrix_writes_18_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ppm");
    let csv = dir.path().join("bench.csv");
    gen(&input, 48, 48, 5);
    let out = blockmeans(&[
        "bench",
        "--input",
        input.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--reps",
        "1",
        "--extent-row",
        "12",
        "--extent-col",
        "12",
        "--extent-square",
        "12",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    assert_eq!(stdout(&out).trim(), "records=18");
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 19);
    assert_eq!(
        lines[0],
        "data_size,strategy,extent,k,workers,serial_ms,block_serial_ms,parallel_ms,speedup,efficiency"
    );
    assert!(lines[1].starts_with("48x48,row,12,2,2,"), "{}", lines[1]);
}

#[test]
fn bench_single_worker_rows_have_efficiency_equal_speedup() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ppm");
    let csv = dir.path().join("bench.csv");
    gen(&input, 32, 32, 9);
    let out = blockmeans(&[
        "bench",
        "--input",
        input.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--workers",
        "1",
        "--reps",
        "1",
        "--extent-row",
        "8",
        "--extent-col",
        "8",
        "--extent-square",
        "8",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[4], "1");
        assert_eq!(fields[8], fields[9], "speedup != efficiency in {line}");
    }
}

#[test]
fn bench_requires_csv_flag() {
    let out = blockmeans(&["bench", "--input", "x.ppm"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--csv"));
}

#[test]
fn compare_prints_four_rows_and_best() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ppm");
    gen(&input, 40, 32, 13);
    let out = blockmeans(&[
        "compare",
        "--input",
        input.to_str().unwrap(),
        "--k",
        "2",
        "--workers",
        "2",
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6, "expected header + 4 rows + best, got:\n{text}");
    assert!(lines[0].starts_with("strategy"));
    assert!(lines[1].starts_with("whole"));

    // The named best strategy carries the minimum wall time of the three.
    let mut walls = Vec::new();
    for line in &lines[2..5] {
        let fields: Vec<&str> = line.split_whitespace().collect();
        walls.push((fields[0].to_string(), fields[2].parse::<f64>().unwrap()));
    }
    let best_line = lines[5];
    assert!(best_line.starts_with("best="), "{best_line}");
    let named = best_line.trim_start_matches("best=");
    let min = walls.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert_eq!(named, min.0, "best={named} but min wall was {min:?}");
}
