//! Process-level tests of the `mpelab` binary: exit codes, report shapes,
//! and file-format round trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mpelab")
}

fn work_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).expect("create work dir");
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn binary")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&output.stdout);
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {text}"))
}

fn write_two_state(dir: &Path, k: f64) -> (String, String) {
    let kernel = dir.join("kernel.json");
    let reward = dir.join("reward.json");
    std::fs::write(
        &kernel,
        r#"{"matrix": [[1.0, 0.0], [0.5, 0.5]]}"#,
    )
    .unwrap();
    std::fs::write(&reward, format!(r#"{{"values": [0.0, {}]}}"#, k.ln())).unwrap();
    (
        kernel.display().to_string(),
        reward.display().to_string(),
    )
}

#[test]
fn solve_exit_code_0_when_solved() {
    let dir = work_dir("solve-ok");
    let (kernel, reward) = write_two_state(&dir, 1.9);
    let out = run(&["solve", "--kernel", &kernel, "--reward", &reward]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["subcommand"], "solve");
    assert!(report["inputs_digest"].as_str().unwrap().len() == 64);
    let results = &report["results"];
    assert_eq!(results["status"], "Solved");
    assert!(results["lambda"].as_f64().unwrap().abs() < 1e-8);
    assert!(results["residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(results["w"].as_array().unwrap().len(), 2);
    assert!(!results["trace"].as_array().unwrap().is_empty());
}

#[test]
fn solve_exit_code_2_when_diverged() {
    let dir = work_dir("solve-diverged");
    let (kernel, reward) = write_two_state(&dir, 2.1);
    let out = run(&[
        "solve",
        "--kernel",
        &kernel,
        "--reward",
        &reward,
        "--span-cap",
        "3.0",
        "--max-iter",
        "10000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["results"]["status"], "Diverged");
}

#[test]
fn solve_exit_code_3_when_inconclusive() {
    let dir = work_dir("solve-inconclusive");
    let (kernel, reward) = write_two_state(&dir, 1.9);
    let out = run(&[
        "solve",
        "--kernel",
        &kernel,
        "--reward",
        &reward,
        "--max-iter",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["results"]["status"], "Inconclusive");
}

#[test]
fn solve_exit_code_1_on_missing_file() {
    let dir = work_dir("solve-missing");
    let (_, reward) = write_two_state(&dir, 1.9);
    let missing = dir.join("no-such-kernel.json").display().to_string();
    let out = run(&["solve", "--kernel", &missing, "--reward", &reward]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn solve_exit_code_1_on_malformed_kernel() {
    let dir = work_dir("solve-malformed");
    let kernel = dir.join("bad.json");
    // Second row sums to 0.9: not stochastic.
    std::fs::write(&kernel, r#"{"matrix": [[1.0, 0.0], [0.5, 0.4]]}"#).unwrap();
    let (_, reward) = write_two_state(&dir, 1.9);
    let out = run(&[
        "solve",
        "--kernel",
        &kernel.display().to_string(),
        "--reward",
        &reward,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("row"), "stderr: {stderr}");
}

#[test]
fn mixing_report_shape() {
    let dir = work_dir("mixing");
    let kernel = dir.join("cyclic.csv");
    std::fs::write(&kernel, "0,0.5,0.5\n0.5,0,0.5\n0.5,0.5,0\n").unwrap();
    let out = run(&[
        "mixing",
        "--kernel",
        &kernel.display().to_string(),
        "--n-max",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let results = stdout_json(&out)["results"].clone();
    assert_eq!(results["lambda"]["1"].as_f64().unwrap(), 0.5);
    let d2 = results["minorization"]["2"]["d"].as_f64().unwrap();
    assert!((d2 - 0.75).abs() < 1e-12);
    assert_eq!(
        results["minorization"]["2"]["eta"].as_array().unwrap().len(),
        3
    );
    assert_eq!(results["strong_ratio"]["1"], "inf");
    assert!((results["strong_ratio"]["2"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn average_csv_is_plot_ready() {
    let dir = work_dir("average");
    let (kernel, reward) = write_two_state(&dir, 1.5);
    let out = run(&[
        "average",
        "--kernel",
        &kernel,
        "--reward",
        &reward,
        "--start",
        "1",
        "--horizon",
        "12",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "n,value");
    assert_eq!(lines.len(), 13);
    // n = 1 row is exactly g(start).
    assert_eq!(lines[1], format!("1,{}", 1.5f64.ln()));
}

#[test]
fn csv_rejected_where_unsupported() {
    let dir = work_dir("csv-rejected");
    let (kernel, reward) = write_two_state(&dir, 1.5);
    let out = run(&[
        "solve",
        "--kernel",
        &kernel,
        "--reward",
        &reward,
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("csv"));
}

#[test]
fn simulate_csv_and_json_agree_on_path_count() {
    let dir = work_dir("simulate");
    let (kernel, reward) = write_two_state(&dir, 1.5);
    let csv = run(&[
        "simulate",
        "--kernel",
        &kernel,
        "--reward",
        &reward,
        "--paths",
        "50",
        "--horizon",
        "8",
        "--seed",
        "11",
        "--start",
        "1",
        "--format",
        "csv",
    ]);
    assert_eq!(csv.status.code(), Some(0));
    let text = String::from_utf8_lossy(&csv.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "path,reward_sum");
    assert_eq!(lines.len(), 51);

    let json = run(&[
        "simulate",
        "--kernel",
        &kernel,
        "--reward",
        &reward,
        "--paths",
        "50",
        "--horizon",
        "8",
        "--seed",
        "11",
        "--start",
        "1",
    ]);
    assert_eq!(json.status.code(), Some(0));
    let results = stdout_json(&json)["results"].clone();
    assert_eq!(results["paths"], 50);
    assert_eq!(results["horizon"], 8);
    assert_eq!(results["seed"], 11);
    assert_eq!(results["rng_algorithm"], "splitmix64-counter");
    assert!(results["value"].as_f64().is_some());
    assert!(results["ci_low"].as_f64().unwrap() <= results["ci_high"].as_f64().unwrap());
}

#[test]
fn simulate_reports_are_deterministic_given_seed() {
    let dir = work_dir("simulate-determinism");
    let (kernel, reward) = write_two_state(&dir, 1.5);
    let args = [
        "simulate", "--kernel", &kernel, "--reward", &reward, "--paths", "40", "--horizon",
        "6", "--seed", "5",
    ];
    let a = stdout_json(&run(&args));
    let b = stdout_json(&run(&args));
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
}

#[test]
fn corpus_files_feed_the_other_subcommands() {
    let dir = work_dir("corpus");
    let prefix = dir.join("rs").display().to_string();
    let out = run(&[
        "corpus",
        "recurrent-shift",
        "--n",
        "32",
        "--level",
        "1.0",
        "--out-prefix",
        &prefix,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["results"]["states"], 32);
    assert!(report["results"]["truncation"]["redirected"].is_array());

    let kernel = format!("{prefix}.kernel.json");
    let reward = format!("{prefix}.reward.json");
    let solve = run(&["solve", "--kernel", &kernel, "--reward", &reward]);
    assert_eq!(
        solve.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&solve.stderr)
    );
    let results = stdout_json(&solve)["results"].clone();
    assert_eq!(results["status"], "Solved");
    // Eigenvalue of the level-1 alternating reward on this chain.
    let expected = 0.5 + ((12.0 + 1f64.exp().powi(2) - 4.0 * 1f64.exp()).sqrt() + 1f64.exp()) / 8.0;
    assert!((results["lambda"].as_f64().unwrap() - expected.ln()).abs() < 1e-4);
}

#[test]
fn corpus_rejects_unknown_family() {
    let out = run(&["corpus", "no-such-family"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown corpus family"));
}

#[test]
fn classify_reports_a_witness() {
    let dir = work_dir("classify");
    let (kernel, _) = write_two_state(&dir, 1.5);
    let out = run(&["classify", "--kernel", &kernel]);
    assert_eq!(out.status.code(), Some(0));
    let results = stdout_json(&out)["results"].clone();
    let witness = results["NotAllG"]["witness"]["values"].as_array().unwrap();
    assert_eq!(witness.len(), 2);
    assert!(witness[1].as_f64().unwrap() > 0.0);
}

#[test]
fn escape_test_parses_lists_and_reports_outcomes() {
    let dir = work_dir("escape");
    let (kernel, _) = write_two_state(&dir, 1.5);
    let out = run(&[
        "escape-test",
        "--kernel",
        &kernel,
        "--support",
        "0",
        "--alphas",
        "0.9, 0.25",
        "--horizon",
        "32",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let results = stdout_json(&out)["results"].clone();
    assert_eq!(results["alphas"].as_array().unwrap().len(), 2);
    assert_eq!(results["outcomes"][0]["PassedAt"], 1);
    assert_eq!(results["outcomes"][1], "Failed");
    assert_eq!(results["vacuous"], false);
}

#[test]
fn escape_test_rejects_bad_alpha() {
    let dir = work_dir("escape-bad");
    let (kernel, _) = write_two_state(&dir, 1.5);
    let out = run(&[
        "escape-test",
        "--kernel",
        &kernel,
        "--support",
        "0",
        "--alphas",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dominance_compares_two_rewards() {
    let dir = work_dir("dominance");
    let kernel = dir.join("flip.csv");
    std::fs::write(&kernel, "0,1\n1,0\n").unwrap();
    let high = dir.join("high.json");
    let low = dir.join("low.json");
    std::fs::write(&high, r#"{"values": [1.0, 1.0]}"#).unwrap();
    std::fs::write(&low, r#"{"values": [0.0, 0.0]}"#).unwrap();
    let out = run(&[
        "dominance",
        "--kernel",
        &kernel.display().to_string(),
        "--reward",
        &high.display().to_string(),
        "--other-reward",
        &low.display().to_string(),
        "--start",
        "0",
        "--horizon",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let results = stdout_json(&out)["results"].clone();
    assert_eq!(results["verdict"], "Dominates");
    assert_eq!(results["law_reward"]["offset"], 4.0);
    assert_eq!(results["law_other_reward"]["offset"], 0.0);
}

#[test]
fn ape_solves_where_mpe_diverges() {
    let dir = work_dir("ape");
    let (kernel, reward) = write_two_state(&dir, 4.0);
    let out = run(&["ape", "--kernel", &kernel, "--reward", &reward]);
    assert_eq!(out.status.code(), Some(0));
    let results = stdout_json(&out)["results"].clone();
    assert!(results["lambda0"].as_f64().unwrap().abs() < 1e-12);
    assert!(results["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = work_dir("out-flag");
    let (kernel, reward) = write_two_state(&dir, 1.5);
    let path = dir.join("report.json");
    let out = run(&[
        "solve",
        "--kernel",
        &kernel,
        "--reward",
        &reward,
        "--out",
        &path.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["results"]["status"], "Solved");
}

#[test]
fn verify_paper_filter_runs_a_single_criterion() {
    let out = run(&["verify-paper", "--filter", "two-state-closed-form"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].contains("criterion  2 PASS"));
}

#[test]
fn verify_paper_rejects_unmatched_filter() {
    let out = run(&["verify-paper", "--filter", "no-such-criterion"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn threads_env_var_is_respected() {
    let out = Command::new(bin())
        .args(["verify-paper", "--filter", "two-state-closed-form"])
        .env("MPELAB_THREADS", "1")
        .output()
        .expect("spawn binary");
    assert_eq!(out.status.code(), Some(0));
}
