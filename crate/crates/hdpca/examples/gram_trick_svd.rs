//! Thin SVD of a tall matrix through the small Gram matrix.
//!
//! A 20000 x 60 matrix never sees a 20000-sided eigenproblem: the whole
//! decomposition runs through the 60 x 60 matrix XᵀX.
//!
//! ```bash
//! cargo run --release --example gram_trick_svd
//! ```

use std::time::Instant;

use hdpca::numerics::{dot, sample_gaussian, thin_svd, SeededRng};

fn main() {
    let (d, n) = (20_000, 60);
    let x = sample_gaussian(&SeededRng::new(42, 0), d, n).unwrap();

    let start = Instant::now();
    let svd = thin_svd(&x).unwrap();
    let elapsed = start.elapsed();

    println!("thin SVD of a {d} x {n} matrix in {elapsed:.2?} (rank {})", svd.rank());
    println!("leading singular values: {:.2?}", &svd.singular[..5]);

    // Orthonormality of both factors.
    let mut worst = 0.0f64;
    for i in 0..svd.rank() {
        for j in 0..svd.rank() {
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst
                .max((dot(svd.left.col(i), svd.left.col(j)) - expect).abs())
                .max((dot(svd.right.col(i), svd.right.col(j)) - expect).abs());
        }
    }
    println!("worst orthonormality defect: {worst:.2e}");

    // Reconstruction error.
    let rec = svd.reconstruct();
    let mut err = 0.0f64;
    for c in 0..n {
        for r in 0..d {
            let e = rec.get(r, c) - x.as_matrix().get(r, c);
            err += e * e;
        }
    }
    println!(
        "relative reconstruction error: {:.2e}",
        err.sqrt() / x.as_matrix().frobenius()
    );
}
