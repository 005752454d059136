use std::path::Path;
use std::process::{Command, Output};

fn seplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seplab")).args(args).env_remove("SEPLAB_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_to_file(args: &[&str], threads: &str, dir: &Path) -> Vec<u8> {
    let path = dir.join(format!("out-{threads}"));
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--threads", threads, "--out", p]);
    let o = seplab(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(&path).unwrap()
}

fn assert_thread_independent(command: &str) {
    let args: Vec<&str> = command.split_whitespace().collect();
    let args = args.as_slice();
    let dir = tempfile::tempdir().unwrap();
    let one = run_to_file(args, "1", dir.path());
    for t in ["2", "4"] {
        assert_eq!(one, run_to_file(args, t, dir.path()), "{args:?} differs at {t} threads");
    }
}

#[test]
fn simulate_is_thread_independent() {
    assert_thread_independent("simulate --n 9 --p 0.4 --reps 300 --seed 5");
    assert_thread_independent("simulate --n 8 --p 0.5 --reps 200 --model triangulation --format json");
}

#[test]
fn sweep_and_clt_are_thread_independent() {
    assert_thread_independent(
        "sweep --n 7 --p-start 0.2 --p-end 0.6 --p-step 0.2 --reps 150 --model triangulation --order fixed",
    );
    assert_thread_independent("clt --n 6,9 --p 0.5 --reps 150 --stein-reps 20");
}

#[test]
fn output_embeds_its_config() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = run_to_file(&["sweep", "--n", "6", "--p", "0.3,0.5", "--reps", "50", "--seed", "11"], "2", dir.path());
    let text = String::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    let config: serde_json::Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(config["seed"], 11);
    assert_eq!(config["p"], serde_json::json!([0.3, 0.5]));
    assert!(config.get("threads").is_none() && config.get("out").is_none());
    assert_eq!(lines.next().unwrap(), "p,n,model,replicates,mean,variance,skewness,ks_distance,seed");
    assert_eq!(lines.count(), 2);
}

#[test]
fn seed_can_come_from_the_environment() {
    let args = ["simulate", "--n", "6", "--p", "0.5", "--reps", "50"];
    let from_env = Command::new(env!("CARGO_BIN_EXE_seplab")).args(args).env("SEPLAB_SEED", "42").output().unwrap();
    let mut explicit: Vec<&str> = args.to_vec();
    explicit.extend(["--seed", "42"]);
    assert_eq!(from_env.stdout, seplab(&explicit).stdout);
    assert_ne!(from_env.stdout, seplab(&args).stdout);
}

#[test]
fn exact_reports_closed_forms() {
    let o = seplab(&["exact", "--n", "4", "--p", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("expectation = 10.5"), "{text}");
    assert!(text.contains("variance_case1 = "));

    let o = seplab(&["exact", "--n", "2", "--p", "0.5", "--model", "triangulation", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["expectation"], 1.0);
}

#[test]
fn simulate_on_two_nodes_has_no_edges() {
    let o = seplab(&["simulate", "--n", "2", "--p", "0.5", "--reps", "100"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(2).unwrap().to_string();
    assert_eq!(row, "0.5,2,polytope,100,0,0,0,nan,1");
}

#[test]
fn oracle_matches_every_graph_on_four_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = seplab(&["oracle", "--n", "4", "--exhaustive", "--out", report.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "64/64 graphs matched");
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(report).unwrap()).unwrap();
    assert_eq!(doc["matched"], 64);
    assert_eq!(doc["mismatches"], serde_json::json!([]));
}

#[test]
fn gradient_checks_report_ratios() {
    let o = seplab(&["gradients", "--n", "7", "--p", "0.5", "--samples", "100", "--model", "triangulation"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["violations"], 0);
    assert!(doc["max_ratio_first"].as_f64().unwrap() <= 1.0);
}

#[test]
fn verify_runs_selected_criteria() {
    let o = seplab(&["verify", "--criteria", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[PASS] criterion  1"));
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        &["simulate", "--n", "5", "--p", "1.5"][..],
        &["simulate", "--n", "5"],
        &["sweep", "--n", "5", "--p-start", "0.5", "--p-end", "0.1", "--p-step", "0.1"],
        &["oracle", "--n", "6", "--exhaustive"],
        &["gradients", "--n", "2", "--p", "0.5"],
        &["verify", "--criteria", "12"],
        &["exact", "--n", "4", "--p", "0.5", "--origin-variant", "other"],
        &["frobnicate"],
    ] {
        let o = seplab(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(seplab(&["--help"]).status.code(), Some(0));
}
