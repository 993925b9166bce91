//! Procrustes alignment of estimated scores to known truth: the fitted
//! diagonal recovers the scaling factors and the fitted angle matches the
//! theoretical rotation.
//!
//! ```bash
//! cargo run --release --example procrustes_alignment
//! ```

use hdpca::bias;
use hdpca::numerics::Matrix;
use hdpca::pca::{self, ScoreKind, ScoreMatrix};
use hdpca::procrustes::{fit_scale_rotation, DEFAULT_MAX_ITER, DEFAULT_TOL};
use hdpca::simulate::{gen_spike, SpikeSpec};

fn main() {
    // Noiseless sanity check: a synthetic target built from known S and R
    // is recovered exactly.
    let truth = hdpca::numerics::sample_gaussian(&hdpca::numerics::SeededRng::new(8, 0), 2, 40)
        .unwrap();
    let theta = 0.25f64;
    let rot = Matrix::from_rows(&[&[theta.cos(), -theta.sin()], &[theta.sin(), theta.cos()]]);
    let mut target = rot.tr_mul(truth.as_matrix());
    target.scale_row(0, 1.5);
    target.scale_row(1, 2.0);
    let exact = fit_scale_rotation(
        &ScoreMatrix::new(truth.as_matrix().clone(), ScoreKind::True),
        &ScoreMatrix::new(target, ScoreKind::Sample),
        DEFAULT_TOL,
        DEFAULT_MAX_ITER,
    )
    .unwrap();
    println!(
        "noiseless recovery: scale = ({:.6}, {:.6}), theta = {:.6} rad, objective = {:.2e}",
        exact.scale[0],
        exact.scale[1],
        exact.theta.unwrap(),
        exact.objective
    );

    // On simulated data the best fit tracks the theoretical bias.
    let d = 5000;
    let spec = SpikeSpec {
        d,
        n: 50,
        m: 2,
        sigma_sq: vec![0.02, 0.01],
        beta: 0.3,
        seed: 7,
        rotate_frame: false,
    };
    let ds = gen_spike(&spec, 1).unwrap();
    let fit = pca::fit(&ds.train, false).unwrap();
    let w1 = ds.oracle.scaled_score_matrix();
    let cov = bias::score_cov(&w1).unwrap();
    let theory = bias::rho_theory(&cov, ds.oracle.tau_sq).unwrap();

    // Scale to W₁ units and align row signs to the bias relation.
    let scaled = pca::sample_scores(&fit, 2).unwrap().scaled(1.0 / (d as f64).sqrt());
    let target = bias::biased_sample_target(&theory, w1.values()).unwrap();
    let signs = bias::row_signs_to_target(scaled.values(), &target);
    let mut aligned = scaled.values().clone();
    for (i, &s) in signs.iter().enumerate() {
        aligned.scale_row(i, s);
    }
    let best = fit_scale_rotation(
        &w1,
        &ScoreMatrix::new(aligned, ScoreKind::Sample),
        DEFAULT_TOL,
        DEFAULT_MAX_ITER,
    )
    .unwrap();

    let theta_theory = theory.rotation.as_ref().unwrap().get(0, 0).clamp(-1.0, 1.0).acos();
    println!();
    println!("simulated data (d = {d}, n = 50):");
    println!(
        "  theoretical: rho = ({:.3}, {:.3}), theta = {:.3} rad",
        theory.rho[0], theory.rho[1], theta_theory
    );
    println!(
        "  best fit:    rho = ({:.3}, {:.3}), theta = {:.3} rad ({} iterations)",
        best.scale[0],
        best.scale[1],
        best.theta.unwrap(),
        best.iters
    );
}
