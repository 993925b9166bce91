//! A compact Monte-Carlo table of scaling-factor estimates: the oracle, the
//! Procrustes best fit, and all data-driven estimators, averaged over
//! repetitions with deterministic per-repetition seeds.
//!
//! ```bash
//! cargo run --release --example bias_table
//! ```

use hdpca::experiments::{run_bias_table, Estimator, ExperimentSpec, ModelSpec};

fn main() {
    let spec = ExperimentSpec {
        model: ModelSpec::Spike { sigma_sq: vec![0.02, 0.01], beta: 0.3 },
        d: 5000,
        n: 50,
        n_test: 1,
        m: 2,
        reps: 20,
        master_seed: 7,
        center: None,
        estimators: vec![
            Estimator::Asymptotic,
            Estimator::Jackknife1,
            Estimator::Jackknife2,
            Estimator::Jackknife3,
            Estimator::Lzw,
        ],
    };
    let report = run_bias_table(&spec).unwrap();
    let mean = report.mean();
    let sd = report.sd();

    println!(
        "spike model, d = {}, n = {}, {} repetitions ({} excluded)",
        spec.d,
        spec.n,
        spec.reps,
        report.excluded()
    );
    println!();
    println!("{:<22} {:>10} {:>10}", "column", "mean", "sd");
    for (i, col) in report.columns.iter().enumerate() {
        println!("{:<22} {:>10.4} {:>10.4}", col, mean[i], sd[i]);
    }
}
