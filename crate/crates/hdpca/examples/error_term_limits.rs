//! The prediction-score error decomposition: every prediction score splits
//! into a signal part driven by the true scores and an error term whose
//! conditional variance has an explicit limit. Here the empirical variances
//! of the error terms are compared with those limits.
//!
//! ```bash
//! cargo run --release --example error_term_limits
//! ```

use hdpca::bias;
use hdpca::experiments::sample_variance;
use hdpca::pca;
use hdpca::simulate::{gen_spike, SpikeSpec};

fn main() {
    let spec = SpikeSpec {
        d: 10_000,
        n: 50,
        m: 2,
        sigma_sq: vec![0.02, 0.01],
        beta: 0.3,
        seed: 23,
        rotate_frame: false,
    };
    let ds = gen_spike(&spec, 2000).unwrap();
    let fit = pca::fit(&ds.train, false).unwrap();

    let cov = bias::score_cov(&ds.oracle.scaled_score_matrix()).unwrap();
    let limits = bias::theory_limits(&ds.oracle, &cov, &ds.population_eigs);
    let eps = bias::epsilon_decomposition(&fit, &ds.oracle, &ds.test).unwrap();

    println!("error-term variances over {} test points:", ds.test.cols());
    for k in 0..2 {
        println!(
            "  component {}: empirical {:.4} vs limit {:.4}",
            k + 1,
            sample_variance(&eps.row(k)),
            limits.eps_var[k]
        );
    }
    let n = fit.n_obs();
    let mut avg = 0.0;
    for k in 2..n {
        avg += sample_variance(&eps.row(k));
    }
    avg /= (n - 2) as f64;
    println!("  noise components (k > m) average: empirical {avg:.4} vs limit {:.4}", limits.eps_var_noise_avg);
    println!();
    println!(
        "second moment of trailing eigenvalues: upsilon^2 = {:.4}, noise level tau^2 = {:.4}",
        limits.upsilon_sq, limits.tau_sq
    );
}
