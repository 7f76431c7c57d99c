//! End-to-end checks of the `arise` binary: subcommands, artifacts, and
//! exit codes (0 success, 1 config error, 2 runtime failure).

use std::fs;
use std::path::Path;
use std::process::Command;

fn arise() -> Command {
    Command::new(env!("CARGO_BIN_EXE_arise"))
}

fn write_tiny_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("exp.conf");
    fs::write(
        &path,
        "env = cartpole\nvariant = arise\nseeds = 0\nhorizon = 64\n\
         total_iterations = 2\nhidden = 8,8\nepochs = 2\nbatch_size = 32\n\
         eval.interval = 4\neval.episodes = 2\ncheckpoint.interval = 1\n",
    )
    .unwrap();
    path
}

#[test]
fn train_then_summarize_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let out = dir.path().join("out");

    let status = arise()
        .args(["train", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("arise__cartpole__seed0.csv").exists());
    assert!(out.join("summary.json").exists());

    let output = arise().args(["summarize", "--in"]).arg(&out).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("cartpole"), "table output: {text}");

    let ckpt = out.join("checkpoints/arise__cartpole__seed0/final");
    let output = arise()
        .args(["eval", "--checkpoint"])
        .arg(&ckpt)
        .args(["--episodes", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("mean greedy return"));
}

#[test]
fn cli_flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let out = dir.path().join("out");
    let status = arise()
        .args(["train", "--config"])
        .arg(&config)
        .args(["--variant", "ppo", "--seeds", "7"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("ppo__cartpole__seed7.csv").exists());
    assert!(!out.join("arise__cartpole__seed0.csv").exists());
}

#[test]
fn config_errors_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "alpha = 1.5\n").unwrap();
    let output = arise().args(["train", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("alpha"));

    let output = arise()
        .args(["train", "--env", "lunarlander"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn runtime_failures_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir_all(&empty).unwrap();
    let output = arise().args(["summarize", "--in"]).arg(&empty).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn resume_flag_continues_a_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let out = dir.path().join("out");
    arise()
        .args(["train", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();

    let ckpt = out.join("checkpoints/arise__cartpole__seed0/iter_000001");
    let resumed_out = dir.path().join("resumed");
    let output = arise()
        .args(["train", "--resume"])
        .arg(&ckpt)
        .arg("--out")
        .arg(&resumed_out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{:?}", output);
    assert!(resumed_out.join("arise__cartpole__seed0.csv").exists());
}
