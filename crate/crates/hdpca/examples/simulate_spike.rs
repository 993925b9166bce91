//! Generate a spike-model dataset and inspect the oracle truth that comes
//! with it: population eigenvalues, spike directions and true scores.
//!
//! ```bash
//! cargo run --release --example simulate_spike
//! ```

use hdpca::simulate::{gen_spike, SpikeSpec};

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

    println!("spike dataset: d = {}, n = {}, n_test = {}", ds.train.rows(), ds.train.cols(), ds.test.cols());
    println!("spike eigenvalues: {:.1}, {:.1}", ds.population_eigs[0], ds.population_eigs[1]);
    println!(
        "next noise eigenvalues: {:.3}, {:.3}, {:.3}",
        ds.population_eigs[2], ds.population_eigs[3], ds.population_eigs[4]
    );
    let noise_mean: f64 =
        ds.population_eigs[2..].iter().sum::<f64>() / (ds.population_eigs.len() - 2) as f64;
    println!("noise eigenvalue mean: {noise_mean:.6} (forced to 1 by construction)");
    println!("oracle noise level tau^2 = {:.6}", ds.oracle.tau_sq);

    // The true score rows have variance close to the spike eigenvalues.
    for i in 0..2 {
        let row = ds.oracle.true_scores.row(i);
        let var = row.iter().map(|v| v * v).sum::<f64>() / row.len() as f64;
        println!(
            "true score row {}: second moment {var:.1} vs population eigenvalue {:.1}",
            i + 1,
            ds.population_eigs[i]
        );
    }
}
