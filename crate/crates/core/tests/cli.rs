use std::fs;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vite-ddqn"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn baseline_reports_gate_metrics() {
    let o = cli(&["baseline", "--problem", "maxcut", "--reps", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("g=19 D=7"), "{}", stdout(&o));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = cli(&["train", "--trials", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"episodes": 3, "not_a_field": 1}"#).unwrap();
    let o = cli(&[
        "train",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = cli(&["plot", "--run", dir.path().to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn train_plot_and_skeleton_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    // file sets the seed, flags override the episode count
    fs::write(
        &config,
        r#"{"problem": "maxcut", "episodes": 50, "seed": 4, "output_dir": "nested/run"}"#,
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_vite-ddqn"))
        .args([
            "train",
            "--config",
            config.to_str().unwrap(),
            "--episodes",
            "6",
        ])
        .env("VITE_DDQN_OUTPUT_ROOT", dir.path())
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let run = dir.path().join("nested/run");
    let log = fs::read_to_string(run.join("episodes.csv")).unwrap();
    assert_eq!(log.lines().count(), 7);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["seed"], 4);
    assert_eq!(summary["config"]["episodes"], 6);

    let o = cli(&["plot", "--run", run.to_str().unwrap()]);
    assert!(o.status.success());
    for f in ["energy.svg", "reward.svg", "gate_count.svg", "depth.svg"] {
        assert!(run.join(f).exists());
    }

    let cands = dir.path().join("skeleton.json");
    let o = cli(&[
        "skeleton",
        "--corpus",
        run.to_str().unwrap(),
        "--support",
        "0.5",
        "--out",
        cands.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(cands).unwrap()).unwrap();
    assert!(parsed.is_array());
}
