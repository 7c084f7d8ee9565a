//! End-to-end runs of the compiled binary.

use std::path::{Path, PathBuf};
use std::process::Command;

fn fsc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fsc"))
}

fn iris_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/iris.csv").to_string()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fsc-cli-test-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn fit_emits_all_artifacts() {
    let out = temp_dir("fit");
    let status = fsc()
        .args([
            "fit",
            "--data",
            &iris_path(),
            "--label-col",
            "species",
            "--unlabel-frac",
            "0.2",
            "--family",
            "t",
            "--structure",
            "UUUU",
            "--alpha",
            "0.6",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    for artifact in ["model.json", "responsibilities.csv", "criteria.csv", "manifest.json"] {
        assert!(out.join(artifact).exists(), "missing {artifact}");
    }

    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("model.json")).unwrap()).unwrap();
    assert_eq!(model["version"], "fsc-model/1");
    assert_eq!(model["family"], "t");
    assert_eq!(model["structure"], "UUUU");
    assert_eq!(model["alpha"], 0.6);
    assert_eq!(model["weights"].as_array().unwrap().len(), 3);
    assert_eq!(model["dof"].as_array().unwrap().len(), 3);

    let criteria = std::fs::read_to_string(out.join("criteria.csv")).unwrap();
    let header = criteria.lines().next().unwrap();
    assert_eq!(header, "BIC,ICL,E,A,U,trW,detW,ARI");

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "fit");
    assert_eq!(manifest["master_seed"], 7);
    assert!(manifest["input_digests"]
        .as_object()
        .unwrap()
        .keys()
        .any(|k| k.ends_with("iris.csv")));
    std::fs::remove_dir_all(out).ok();
}

#[test]
fn fit_is_reproducible_across_runs() {
    let out_a = temp_dir("repro-a");
    let out_b = temp_dir("repro-b");
    for out in [&out_a, &out_b] {
        let status = fsc()
            .args([
                "fit",
                "--data",
                &iris_path(),
                "--label-col",
                "species",
                "--unlabel-frac",
                "0.3",
                "--family",
                "gaussian",
                "--alpha",
                "0.4",
                "--seed",
                "99",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    }
    for artifact in ["model.json", "responsibilities.csv", "criteria.csv"] {
        let a = std::fs::read(out_a.join(artifact)).unwrap();
        let b = std::fs::read(out_b.join(artifact)).unwrap();
        assert_eq!(a, b, "{artifact} differs between identical runs");
    }
    std::fs::remove_dir_all(out_a).ok();
    std::fs::remove_dir_all(out_b).ok();
}

#[test]
fn missing_label_column_is_usage_error_naming_the_column() {
    let out = temp_dir("badcol");
    let output = fsc()
        .args([
            "fit",
            "--data",
            &iris_path(),
            "--label-col",
            "speciez",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("speciez"), "stderr: {stderr}");
    std::fs::remove_dir_all(out).ok();
}

#[test]
fn discriminant_fit_without_labels_is_numerical_failure() {
    // All rows unlabelled at α = 1: the labelled block is empty, so every
    // component is starved.
    let dir = temp_dir("nolabels");
    let data = dir.join("unlabelled.csv");
    std::fs::write(
        &data,
        "x,y,label\n0.0,0.1,\n0.3,0.2,\n5.0,5.2,\n5.1,4.9,\n0.2,0.4,\n5.3,5.1,\n",
    )
    .unwrap();
    let output = fsc()
        .args([
            "fit",
            "--data",
            data.to_str().unwrap(),
            "--label-col",
            "label",
            "--alpha",
            "1.0",
            "--groups",
            "2",
            "--out",
            dir.join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("degenerate"), "stderr: {stderr}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn ari_of_identical_files_is_one() {
    let dir = temp_dir("ari");
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    std::fs::write(&a, "x\nx\ny\ny\nz\n").unwrap();
    std::fs::copy(&a, &b).unwrap();
    let output = fsc()
        .args(["ari", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "1.000000");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn simulate_row_count_matches_design() {
    let out = temp_dir("sim");
    let status = fsc()
        .args([
            "simulate",
            "--scenario",
            "two-group-t",
            "--delta",
            "5",
            "--reps",
            "2",
            "--p",
            "20,50",
            "--grid",
            "0:1:0.5",
            "--n-per-group",
            "25",
            "--seed",
            "42",
            "--threads",
            "2",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let results = std::fs::read_to_string(out.join("results.csv")).unwrap();
    // 2 reps × 2 percentages × 3 weights + header.
    assert_eq!(results.lines().count(), 2 * 2 * 3 + 1);
    assert!(out.join("summary.json").exists());
    assert!(out.join("ari_sweep.svg").exists());
    assert!(out.join("manifest.json").exists());
    std::fs::remove_dir_all(out).ok();
}

#[test]
fn select_report_covers_splits_and_grid() {
    let out = temp_dir("select");
    let status = fsc()
        .args([
            "select",
            "--data",
            &iris_path(),
            "--label-col",
            "species",
            "--family",
            "gaussian",
            "--structures",
            "UUUU,CIIC",
            "--procedure",
            "1",
            "--p",
            "80",
            "--splits",
            "2",
            "--grid",
            "0:1:0.25",
            "--seed",
            "5",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let report = std::fs::read_to_string(out.join("report.csv")).unwrap();
    // 2 splits × 5 weights × 2 structures + header.
    assert_eq!(report.lines().count(), 2 * 5 * 2 + 1);
    assert!(out.join("summary.json").exists());
    assert!(out.join("criterion_ari_boxplot.svg").exists());
    std::fs::remove_dir_all(out).ok();
}

#[test]
fn unknown_flag_is_usage_error() {
    let output = fsc().args(["fit", "--frobnicate", "1"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn env_seed_fallback_is_used() {
    let dir = temp_dir("envseed");
    let out_env = dir.join("env");
    let out_flag = dir.join("flag");
    let run = |out: &Path, use_env: bool| {
        let mut cmd = fsc();
        cmd.args([
            "fit",
            "--data",
            &iris_path(),
            "--label-col",
            "species",
            "--unlabel-frac",
            "0.5",
            "--out",
            out.to_str().unwrap(),
        ]);
        if use_env {
            cmd.env("FSC_SEED", "1234");
        } else {
            cmd.args(["--seed", "1234"]);
        }
        assert!(cmd.status().unwrap().success());
    };
    run(&out_env, true);
    run(&out_flag, false);
    assert_eq!(
        std::fs::read(out_env.join("model.json")).unwrap(),
        std::fs::read(out_flag.join("model.json")).unwrap()
    );
    std::fs::remove_dir_all(dir).ok();
}
