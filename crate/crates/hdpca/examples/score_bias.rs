//! The score-bias phenomenon: sample scores are uniformly stretched and
//! prediction scores uniformly shrunk, both by the factor
//! ρ_k = √(1 + τ²/λ_k(𝒲)), and both rotated by the same small angle.
//!
//! ```bash
//! cargo run --release --example score_bias
//! ```

use hdpca::bias;
use hdpca::pca;
use hdpca::simulate::{gen_spike, SpikeSpec};

fn row_rms(values: &[f64]) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

fn main() {
    let spec = SpikeSpec {
        d: 10_000,
        n: 50,
        m: 2,
        sigma_sq: vec![0.02, 0.01],
        beta: 0.3,
        seed: 1,
        rotate_frame: false,
    };
    let ds = gen_spike(&spec, 20).unwrap();
    let fit = pca::fit(&ds.train, false).unwrap();

    let cov = bias::score_cov(&ds.oracle.scaled_score_matrix()).unwrap();
    let theory = bias::rho_theory(&cov, ds.oracle.tau_sq).unwrap();

    let sample = pca::sample_scores(&fit, 2).unwrap();
    let pred = pca::predict_scores(&fit, &ds.test, 2).unwrap();

    println!("theoretical scaling factors: rho = ({:.3}, {:.3})", theory.rho[0], theory.rho[1]);
    let r = theory.rotation.as_ref().unwrap();
    println!(
        "rotation angle: {:.1} degrees",
        r.get(0, 0).clamp(-1.0, 1.0).acos().to_degrees()
    );
    println!();
    println!("component | true RMS | sample RMS (stretched) | prediction RMS (shrunk)");
    for i in 0..2 {
        let true_rms = row_rms(&ds.oracle.true_scores.row(i));
        let sample_rms = row_rms(&sample.row(i));
        let pred_true_rms = row_rms(&ds.oracle_test.true_scores.row(i));
        let pred_rms = row_rms(&pred.row(i));
        println!(
            "    {}     | {true_rms:7.1}  | {sample_rms:7.1} (x{:.3})       | {pred_rms:7.1} (x{:.3})",
            i + 1,
            sample_rms / true_rms,
            pred_rms / pred_true_rms
        );
    }
    println!();
    println!("sample stretch tracks rho, prediction shrink tracks 1/rho.");
}
