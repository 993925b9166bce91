//! End-to-end checks of the command-line interface: exit codes, file
//! schemas, determinism and the export/import round trip.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hdpca")
}

fn work_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hdpca-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = work_dir("simulate");
    let args = [
        "simulate", "--model", "spike", "--d", "500", "--n", "25", "--seed", "9", "--n-test",
        "10", "--out", "a",
    ];
    let out = run(&args, &dir);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let mut args_b = args;
    args_b[args.len() - 1] = "b";
    assert!(run(&args_b, &dir).status.success());
    let train_a = fs::read(dir.join("a/train.csv")).unwrap();
    let train_b = fs::read(dir.join("b/train.csv")).unwrap();
    assert_eq!(train_a, train_b, "same seed must give byte-identical exports");
    for f in [
        "test.csv",
        "oracle_directions.csv",
        "oracle_sigma_sq.csv",
        "oracle_tau_sq.csv",
        "oracle_true_scores.csv",
        "oracle_scaled_scores.csv",
        "oracle_test_scores.csv",
    ] {
        assert!(dir.join("a").join(f).exists(), "{f} missing");
    }
}

#[test]
fn scores_round_trip_matches_in_process_pipeline() {
    let dir = work_dir("scores");
    assert!(run(
        &[
            "simulate", "--model", "spike", "--d", "400", "--n", "20", "--seed", "3",
            "--n-test", "5", "--out", "ds",
        ],
        &dir
    )
    .status
    .success());
    let out = run(
        &[
            "scores",
            "--train",
            "ds/train.csv",
            "--test",
            "ds/test.csv",
            "--m",
            "2",
            "--full-precision",
            "--out",
            "sc",
        ],
        &dir,
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // Recompute in process from the same file.
    let file = fs::File::open(dir.join("ds/train.csv")).unwrap();
    let x = hdpca::report::read_matrix_csv(std::io::BufReader::new(file)).unwrap();
    let fit = hdpca::pca::fit(&x, false).unwrap();
    let scores = hdpca::pca::sample_scores(&fit, 2).unwrap();

    let text = fs::read_to_string(dir.join("sc/sample_scores.csv")).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "comp_1,comp_2");
    for (j, line) in lines.enumerate() {
        for (i, field) in line.split(',').enumerate() {
            let v: f64 = field.parse().unwrap();
            assert_eq!(
                v.to_bits(),
                scores.get(i, j).to_bits(),
                "score ({i},{j}) differs from the in-process pipeline"
            );
        }
    }
    assert!(dir.join("sc/prediction_scores_adjusted.csv").exists());
    assert!(dir.join("sc/bias_factors.csv").exists());
}

#[test]
fn scores_without_test_file_writes_sample_outputs_only() {
    let dir = work_dir("scores-no-test");
    assert!(run(
        &["simulate", "--d", "300", "--n", "15", "--seed", "4", "--out", "ds"],
        &dir
    )
    .status
    .success());
    let out = run(&["scores", "--train", "ds/train.csv", "--m", "2", "--out", "sc"], &dir);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("sc/sample_scores.csv").exists());
    assert!(!dir.join("sc/prediction_scores.csv").exists());
}

#[test]
fn scores_rejects_m_not_below_n() {
    let dir = work_dir("scores-m");
    assert!(run(
        &["simulate", "--d", "300", "--n", "10", "--seed", "4", "--out", "ds"],
        &dir
    )
    .status
    .success());
    let out = run(&["scores", "--train", "ds/train.csv", "--m", "10"], &dir);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("trailing eigenvalues"), "message was: {err}");
}

#[test]
fn ragged_csv_reports_line_number() {
    let dir = work_dir("ragged");
    fs::write(dir.join("bad.csv"), "1.0,2.0,3.0\n4.0,5.0\n").unwrap();
    let out = run(&["scores", "--train", "bad.csv", "--m", "1"], &dir);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "message was: {err}");
}

#[test]
fn degenerate_mixture_exits_with_data_error() {
    let dir = work_dir("degenerate");
    let out = run(
        &["simulate", "--model", "mixture", "--d", "300", "--n", "20", "--a", "0"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn unknown_target_is_usage_error() {
    let dir = work_dir("usage");
    let out = run(&["reproduce", "table9"], &dir);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn reproduce_table1_smoke_schema() {
    let dir = work_dir("table1");
    let out = run(
        &[
            "reproduce", "table1", "--reps", "3", "--d", "600", "--n", "25", "--n-test", "50",
            "--seed", "2", "--out", "t1.csv",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.join("t1.csv")).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "rep,seed,sample_var_3,pred_var_3,sample_corr_3,pred_corr_3,population_lambda_3"
    );
    assert!(text.contains("# aggregate"));
    assert!(text.contains("\nmean,,"));
    assert!(text.contains("\nsd,,"));
}

#[test]
fn reproduce_is_thread_count_invariant() {
    let dir = work_dir("threads");
    for threads in ["1", "4"] {
        let out = run(
            &[
                "reproduce", "table3", "--reps", "4", "--d", "400", "--n", "30", "--n-test",
                "30", "--seed", "6", "--threads", threads, "--full-precision", "--out",
                &format!("t{threads}.csv"),
            ],
            &dir,
        );
        assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read(dir.join("t1.csv")).unwrap();
    let b = fs::read(dir.join("t4.csv")).unwrap();
    assert_eq!(a, b, "thread cap changed the report bytes");
}

#[test]
fn fig1_deterministic_and_fig4_writes_both_panels() {
    let dir = work_dir("figs");
    for name in ["p1.csv", "p2.csv"] {
        let out = run(
            &[
                "reproduce", "fig1", "--d", "800", "--n", "25", "--n-test", "10", "--seed",
                "5", "--out", name,
            ],
            &dir,
        );
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(
        fs::read(dir.join("p1.csv")).unwrap(),
        fs::read(dir.join("p2.csv")).unwrap()
    );
    let head = fs::read_to_string(dir.join("p1.csv")).unwrap();
    assert!(head
        .lines()
        .any(|l| l == "set,index,true_1,true_2,score_1,score_2,adjusted_1,adjusted_2"));

    let out = run(
        &[
            "reproduce", "fig4", "--reps", "3", "--d", "700", "--n", "25", "--n-test", "10",
            "--seed", "5", "--out", "f4.csv",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("f4_scaling.csv").exists());
    assert!(dir.join("f4_correlations.csv").exists());
}

#[test]
fn config_file_fills_unset_flags() {
    let dir = work_dir("config");
    fs::write(
        dir.join("run.conf"),
        "d = 500\nn = 20\nseed = 11\nn_test = 8\nout = from_config\n",
    )
    .unwrap();
    let out = run(&["simulate", "--config", "run.conf", "--n", "25"], &dir);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    // Flag wins over config for n; config supplies the rest.
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("d=500"), "stdout: {stdout}");
    assert!(stdout.contains("n=25"), "stdout: {stdout}");
    assert!(dir.join("from_config/train.csv").exists());
}

#[test]
fn manifest_names_the_rng() {
    let dir = work_dir("manifest");
    let out = run(
        &["simulate", "--d", "300", "--n", "15", "--seed", "1", "--manifest", "--out", "ds"],
        &dir,
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("# manifest rng=chacha8"), "stdout: {stdout}");
}

#[test]
fn table2_grid_schema() {
    let dir = work_dir("table2");
    let out = run(
        &[
            "reproduce", "table2", "--reps", "2", "--d", "600", "--n", "25", "--seed", "3",
            "--estimators", "asymptotic,lzw", "--out", "t2.csv",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.join("t2.csv")).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "model,param,d,n,component,theory_mean,theory_sd,best_mean,asymptotic_mean,lzw_mean"
    );
    // 3 configurations (two spike decay rates + mixture) x 2 components.
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 6);
}
