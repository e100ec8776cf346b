//! Drives the `bog` binary end to end: happy path, sweep, exit codes for
//! invalid input versus file-format failures, and idempotent reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bog(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bog"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn full_pipeline_happy_path() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    assert_ok(&bog(
        root,
        &[
            "synth",
            "--dataset",
            "data",
            "--genres",
            "3",
            "--videos-per-genre",
            "8",
            "--frames-per-video",
            "4",
            "--seed",
            "7",
        ],
    ));
    assert!(root.join("data/manifest.csv").exists());

    assert_ok(&bog(
        root,
        &["extract", "--manifest", "data/manifest.csv", "--output", "out"],
    ));
    assert!(root.join("out/features_train_gch.bogf").exists());
    assert!(root.join("out/features_test_gch.bogf").exists());
    assert!(root.join("out/run_config_gch.toml").exists());

    assert_ok(&bog(
        root,
        &[
            "train",
            "--manifest",
            "data/manifest.csv",
            "--output",
            "out",
            "--frames-per-genre",
            "8",
            "--with-test-accuracy",
        ],
    ));
    assert!(root.join("out/model_gch.bogm").exists());
    assert!(root.join("out/train_report_gch.json").exists());

    assert_ok(&bog(
        root,
        &[
            "train",
            "--manifest",
            "data/manifest.csv",
            "--output",
            "out",
            "--sweep",
            "4,6",
        ],
    ));
    assert!(root.join("out/model_gch_n4.bogm").exists());
    assert!(root.join("out/model_gch_n6.bogm").exists());
    assert!(root.join("out/train_sweep_gch.csv").exists());

    assert_ok(&bog(
        root,
        &[
            "encode",
            "--manifest",
            "data/manifest.csv",
            "--output",
            "out",
            "--csv",
        ],
    ));
    assert!(root.join("out/bog_test_gch.bogb").exists());
    let csv = std::fs::read_to_string(root.join("out/bog_test_gch.csv")).unwrap();
    assert!(csv.starts_with("video_id,"));

    let eval = bog(
        root,
        &[
            "evaluate",
            "--manifest",
            "data/manifest.csv",
            "--output",
            "out",
        ],
    );
    assert_ok(&eval);
    assert!(String::from_utf8_lossy(&eval.stdout).contains("MAP"));
    assert!(root.join("out/eval_report_gch.json").exists());
    assert!(root.join("out/eval_report_gch.csv").exists());
    for r in 0..5 {
        assert!(root.join(format!("out/runs_gch_rep{r}.trec")).exists());
    }

    // Self-comparison: zero difference everywhere, never significant.
    let cmp = bog(
        root,
        &[
            "compare",
            "--a",
            "out/eval_report_gch.csv",
            "--b",
            "out/eval_report_gch.csv",
            "--name-a",
            "bog",
            "--name-b",
            "bog",
            "--output",
            "out",
        ],
    );
    assert_ok(&cmp);
    assert!(String::from_utf8_lossy(&cmp.stdout).contains("not significant"));
    assert!(root.join("out/comparison.md").exists());
}

#[test]
fn synth_refuses_nonempty_dir_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    std::fs::create_dir(root.join("data")).unwrap();
    std::fs::write(root.join("data/keep.txt"), "x").unwrap();

    let args = [
        "synth",
        "--dataset",
        "data",
        "--genres",
        "2",
        "--videos-per-genre",
        "5",
        "--frames-per-video",
        "2",
    ];
    let refused = bog(root, &args);
    assert_eq!(exit_code(&refused), 1);
    assert!(String::from_utf8_lossy(&refused.stderr).contains("--force"));

    let mut forced = args.to_vec();
    forced.push("--force");
    assert_ok(&bog(root, &forced));
}

#[test]
fn missing_artifacts_exit_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    assert_ok(&bog(
        root,
        &[
            "synth",
            "--dataset",
            "data",
            "--genres",
            "2",
            "--videos-per-genre",
            "5",
            "--frames-per-video",
            "2",
        ],
    ));

    // Evaluate with no encoded corpus: the missing file is an I/O failure.
    let out = bog(
        root,
        &["evaluate", "--manifest", "data/manifest.csv", "--output", "out"],
    );
    assert_eq!(exit_code(&out), 2);

    // Train with no cache: an explicit precondition, reported as invalid input.
    let out = bog(
        root,
        &["train", "--manifest", "data/manifest.csv", "--output", "out"],
    );
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("extract"));
}

#[test]
fn corrupt_cache_exits_with_format_code() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    assert_ok(&bog(
        root,
        &[
            "synth",
            "--dataset",
            "data",
            "--genres",
            "2",
            "--videos-per-genre",
            "5",
            "--frames-per-video",
            "2",
        ],
    ));
    assert_ok(&bog(
        root,
        &[
            "extract",
            "--manifest",
            "data/manifest.csv",
            "--split",
            "train",
            "--output",
            "out",
        ],
    ));

    let cache = root.join("out/features_train_gch.bogf");
    let mut bytes = std::fs::read(&cache).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0xFF;
    std::fs::write(&cache, bytes).unwrap();

    let out = bog(
        root,
        &["train", "--manifest", "data/manifest.csv", "--output", "out"],
    );
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn invalid_config_exits_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    std::fs::write(root.join("bad.toml"), "query_fraction = 0.0\n").unwrap();
    let out = bog(
        root,
        &[
            "extract",
            "--manifest",
            "missing.csv",
            "--config",
            "bad.toml",
        ],
    );
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("query_fraction"));
}

#[test]
fn usage_errors_and_help() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    assert_eq!(exit_code(&bog(root, &["no-such-command"])), 1);
    let help = bog(root, &["--help"]);
    assert_eq!(exit_code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("synth"));
}

#[test]
fn extract_rerun_reuses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    assert_ok(&bog(
        root,
        &[
            "synth",
            "--dataset",
            "data",
            "--genres",
            "2",
            "--videos-per-genre",
            "5",
            "--frames-per-video",
            "2",
        ],
    ));
    let args = [
        "extract",
        "--manifest",
        "data/manifest.csv",
        "--split",
        "test",
        "--output",
        "out",
    ];
    assert_ok(&bog(root, &args));
    let first = std::fs::read(root.join("out/features_test_gch.bogf")).unwrap();
    let rerun = bog(root, &args);
    assert_ok(&rerun);
    assert!(String::from_utf8_lossy(&rerun.stdout).contains("extracted 0 frames"));
    let second = std::fs::read(root.join("out/features_test_gch.bogf")).unwrap();
    assert_eq!(first, second);
}
