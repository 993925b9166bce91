//! Dense-matrix primitives sized for tall, skinny data.
//!
//! Everything here assumes the regime where one side of the data matrix is
//! small (observations) and the other may be huge (variables): the thin SVD
//! is always routed through the min(d, n)-sized Gram matrix, so a fit at
//! d = 20000, n = 100 costs one 100 × 100 eigendecomposition plus O(dn)
//! products. All functions are pure and deterministic, including signs.

mod eigen;
mod matrix;
mod rng;

pub use eigen::{sym_eig, SymEig, SYMMETRY_TOL};
pub use matrix::{dot, Matrix};
pub use rng::{mix_seed, sample_gaussian, SeededRng, RNG_ALGORITHM};

use crate::error::{Error, Result};

/// Data matrix: d rows (variables) × n columns (observations), all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix(Matrix);

impl DataMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(Error::InvalidInput(format!(
                "data matrix needs at least 1 row and 1 column, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::InvalidInput("data matrix has non-finite entries".into()));
        }
        Ok(DataMatrix(m))
    }

    pub fn from_column_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        DataMatrix::new(Matrix::from_column_major(rows, cols, data)?)
    }

    /// Number of variables d.
    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    /// Number of observations n.
    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

/// Thin singular value decomposition `X = left · diag(singular) · rightᵀ`.
///
/// `r` is the effective rank: exact zero singular values are truncated, so
/// `left` and `right` always have orthonormal columns.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    /// d × r orthonormal columns.
    pub left: Matrix,
    /// Non-increasing, positive singular values.
    pub singular: Vec<f64>,
    /// n × r orthonormal columns.
    pub right: Matrix,
}

impl ThinSvd {
    pub fn rank(&self) -> usize {
        self.singular.len()
    }

    /// `left · diag(singular) · rightᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let mut scaled = self.left.clone();
        for (i, &s) in self.singular.iter().enumerate() {
            scaled.scale_col(i, s);
        }
        scaled.matmul(&self.right.transpose())
    }
}

/// Thin SVD via the Gram matrix of the short side.
///
/// For d ≥ n the n × n matrix XᵀX is eigendecomposed and left vectors are
/// recovered as X·v/σ (one re-orthonormalization pass guards against the
/// loss of orthogonality when singular values are spread out); the d < n
/// case runs on the transpose and swaps the factors back. Sign convention:
/// the largest-magnitude entry of each right vector is positive, ties
/// resolved toward the lowest index.
pub fn thin_svd(x: &DataMatrix) -> Result<ThinSvd> {
    let m = x.as_matrix();
    if m.rows() >= m.cols() {
        thin_svd_tall(m)
    } else {
        let t = m.transpose();
        let svd = thin_svd_tall(&t)?;
        let mut out = ThinSvd { left: svd.right, singular: svd.singular, right: svd.left };
        apply_right_sign_convention(&mut out);
        Ok(out)
    }
}

fn thin_svd_tall(m: &Matrix) -> Result<ThinSvd> {
    let n = m.cols();
    let gram = m.gram();
    let eig = sym_eig(&gram, n)?;

    // Rank cut: Gram eigenvalues at the eigensolver noise floor eps·‖G‖ are
    // indistinguishable from zero and would only produce garbage directions.
    let theta_max = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = 4.0 * theta_max * (m.rows().max(n) as f64) * f64::EPSILON;
    let rank = eig.values.iter().take_while(|&&t| t > cutoff).count();

    let singular: Vec<f64> = eig.values[..rank].iter().map(|&t| t.sqrt()).collect();
    let right = eig.vectors.take_cols(rank);

    // left_i = X v_i / sigma_i, then one modified Gram-Schmidt pass.
    let mut left = m.matmul(&right);
    for (i, &s) in singular.iter().enumerate() {
        left.scale_col(i, 1.0 / s);
    }
    for i in 0..rank {
        for j in 0..i {
            let proj = dot(left.col(j), left.col(i));
            let (head, tail) = split_cols(&mut left, j, i);
            for (t, h) in tail.iter_mut().zip(head.iter()) {
                *t -= proj * h;
            }
        }
        let norm = dot(left.col(i), left.col(i)).sqrt();
        left.scale_col(i, 1.0 / norm);
    }

    let mut out = ThinSvd { left, singular, right };
    apply_right_sign_convention(&mut out);
    Ok(out)
}

/// Borrow two distinct columns mutably (j < i).
fn split_cols(m: &mut Matrix, j: usize, i: usize) -> (&[f64], &mut [f64]) {
    debug_assert!(j < i);
    let rows = m.rows();
    let data = m.data_mut();
    let (a, b) = data.split_at_mut(i * rows);
    (&a[j * rows..(j + 1) * rows], &mut b[..rows])
}

fn apply_right_sign_convention(svd: &mut ThinSvd) {
    for c in 0..svd.rank() {
        let col = svd.right.col(c);
        let mut best = 0usize;
        let mut best_abs = col[0].abs();
        for (i, v) in col.iter().enumerate().skip(1) {
            if v.abs() > best_abs {
                best_abs = v.abs();
                best = i;
            }
        }
        if svd.right.get(best, c) < 0.0 {
            svd.right.scale_col(c, -1.0);
            svd.left.scale_col(c, -1.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: cyclic Jacobi eigensolver. Shares no code with the
    /// Householder/QL path above.
    fn jacobi_eig(a: &Matrix) -> (Vec<f64>, Matrix) {
        let n = a.rows();
        let mut m = a.clone();
        let mut v = Matrix::identity(n);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(m.get(p, q).abs());
                }
            }
            if off < 1e-14 * m.max_abs().max(1e-300) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m.get(p, q);
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let mkp = m.get(k, p);
                        let mkq = m.get(k, q);
                        m.set(k, p, c * mkp - s * mkq);
                        m.set(k, q, s * mkp + c * mkq);
                    }
                    for k in 0..n {
                        let mpk = m.get(p, k);
                        let mqk = m.get(q, k);
                        m.set(p, k, c * mpk - s * mqk);
                        m.set(q, k, s * mpk + c * mqk);
                    }
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
        let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m.get(i, i), i)).collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut vectors = Matrix::zeros(n, n);
        for (out, &(_, src)) in pairs.iter().enumerate() {
            for r in 0..n {
                vectors.set(r, out, v.get(r, src));
            }
        }
        (values, vectors)
    }

    fn random_data(seed: u64, rows: usize, cols: usize) -> DataMatrix {
        sample_gaussian(&SeededRng::new(seed, 0), rows, cols).unwrap()
    }

    fn assert_orthonormal(m: &Matrix, tol: f64) {
        for i in 0..m.cols() {
            for j in 0..m.cols() {
                let expect = if i == j { 1.0 } else { 0.0 };
                let got = dot(m.col(i), m.col(j));
                assert!(
                    (got - expect).abs() <= tol,
                    "column pair ({i},{j}) inner product {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn svd_identity() {
        let x = DataMatrix::new(Matrix::identity(2)).unwrap();
        let svd = thin_svd(&x).unwrap();
        assert_eq!(svd.rank(), 2);
        assert!((svd.singular[0] - 1.0).abs() < 1e-12);
        assert!((svd.singular[1] - 1.0).abs() < 1e-12);
        for c in 0..2 {
            for r in 0..2 {
                assert!((svd.left.get(r, c).abs() - svd.right.get(r, c).abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn svd_rank_one_wide() {
        // X = u vᵀ with u = (3,4)ᵀ, v = e₁ in R³: single singular value 5.
        let u = [3.0, 4.0];
        let v = [1.0, 0.0, 0.0];
        let mut m = Matrix::zeros(2, 3);
        for r in 0..2 {
            for c in 0..3 {
                m.set(r, c, u[r] * v[c]);
            }
        }
        let svd = thin_svd(&DataMatrix::new(m).unwrap()).unwrap();
        assert_eq!(svd.rank(), 1, "rank-1 input must truncate to one component");
        assert!((svd.singular[0] - 5.0).abs() < 1e-10);
    }

    #[test]
    fn svd_matches_jacobi_gram_oracle() {
        let x = random_data(11, 50, 5);
        let svd = thin_svd(&x).unwrap();
        let (oracle_vals, _) = jacobi_eig(&x.as_matrix().gram());
        for (s, t) in svd.singular.iter().zip(oracle_vals.iter()) {
            let rel = (s - t.sqrt()).abs() / t.sqrt();
            assert!(rel <= 1e-10, "singular value {s} vs oracle {} rel err {rel}", t.sqrt());
        }
    }

    #[test]
    fn svd_invariants_random() {
        for (seed, d, n) in [(1u64, 40, 7), (2, 9, 9), (3, 5, 12)] {
            let x = random_data(seed, d, n);
            let svd = thin_svd(&x).unwrap();
            assert_orthonormal(&svd.left, 1e-10);
            assert_orthonormal(&svd.right, 1e-10);
            for w in svd.singular.windows(2) {
                assert!(w[0] >= w[1]);
            }
            let err = {
                let rec = svd.reconstruct();
                let mut diff = 0.0f64;
                for c in 0..n {
                    for r in 0..d {
                        let e = rec.get(r, c) - x.as_matrix().get(r, c);
                        diff += e * e;
                    }
                }
                diff.sqrt()
            };
            assert!(err <= 1e-8 * x.as_matrix().frobenius());
        }
    }

    #[test]
    fn svd_deterministic_including_signs() {
        let x = random_data(5, 30, 6);
        let a = thin_svd(&x).unwrap();
        let b = thin_svd(&x).unwrap();
        assert_eq!(a.left.data(), b.left.data());
        assert_eq!(a.right.data(), b.right.data());
        assert_eq!(a.singular, b.singular);
    }

    #[test]
    fn gram_trick_equivalence() {
        // Nonzero eigenvalues of XXᵀ/n (via the oracle) match XᵀX/n eigenvalues.
        let x = random_data(17, 30, 8);
        let n = x.cols() as f64;
        let small = sym_eig(&x.as_matrix().gram().scale(1.0 / n), x.cols()).unwrap();
        let big_mat = x.as_matrix().matmul(&x.as_matrix().transpose()).scale(1.0 / n);
        let (big_vals, _) = jacobi_eig(&big_mat);
        for (i, v) in small.values.iter().enumerate() {
            let rel = (v - big_vals[i]).abs() / v.abs().max(1e-300);
            assert!(rel <= 1e-10, "eigenvalue {i}: {v} vs {} rel {rel}", big_vals[i]);
        }
    }

    #[test]
    fn eig_diagonal_with_permutation() {
        let a = Matrix::from_rows(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]);
        let eig = sym_eig(&a, 3).unwrap();
        assert_eq!(eig.values, vec![3.0, 2.0, 1.0]);
        // Eigenvectors are signed unit coordinate columns e₁, e₃, e₂.
        assert_eq!(eig.vectors.col(0), &[1.0, 0.0, 0.0]);
        assert_eq!(eig.vectors.col(1), &[0.0, 0.0, 1.0]);
        assert_eq!(eig.vectors.col(2), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn eig_two_by_two() {
        let a = Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let eig = sym_eig(&a, 2).unwrap();
        assert!((eig.values[0] - 3.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
        let s = 0.5f64.sqrt();
        for (col, expect) in [(0, [s, s]), (1, [s, -s])] {
            for r in 0..2 {
                assert!((eig.vectors.get(r, col) - expect[r]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eig_residual_random() {
        let z = random_data(23, 6, 6);
        let a = {
            let m = z.as_matrix();
            let mut s = Matrix::zeros(6, 6);
            for i in 0..6 {
                for j in 0..6 {
                    s.set(i, j, 0.5 * (m.get(i, j) + m.get(j, i)));
                }
            }
            s
        };
        let eig = sym_eig(&a, 6).unwrap();
        let fro = a.frobenius();
        for k in 0..6 {
            let v: Vec<f64> = eig.vectors.col(k).to_vec();
            let mut resid = 0.0f64;
            for i in 0..6 {
                let av = dot(&a.row(i), &v);
                let r = av - eig.values[k] * v[i];
                resid += r * r;
            }
            assert!(resid.sqrt() <= 1e-10 * fro, "eigenpair {k} residual {}", resid.sqrt());
        }
        assert_orthonormal(&eig.vectors, 1e-10);
    }

    #[test]
    fn eig_rejects_asymmetric() {
        let a = Matrix::from_rows(&[&[1.0, 2.0], &[0.5, 1.0]]);
        assert!(sym_eig(&a, 2).is_err());
    }

    #[test]
    fn eig_top_k_only() {
        let a = Matrix::from_rows(&[&[4.0, 0.0, 0.0], &[0.0, 5.0, 0.0], &[0.0, 0.0, 1.0]]);
        let eig = sym_eig(&a, 2).unwrap();
        assert_eq!(eig.values, vec![5.0, 4.0]);
        assert_eq!(eig.vectors.cols(), 2);
    }

    proptest! {
        #[test]
        fn prop_eigenvalue_sum_equals_trace(vals in proptest::collection::vec(-10.0f64..10.0, 16)) {
            let mut a = Matrix::zeros(4, 4);
            let mut idx = 0;
            for i in 0..4 {
                for j in i..4 {
                    a.set(i, j, vals[idx]);
                    a.set(j, i, vals[idx]);
                    idx += 1;
                }
            }
            let eig = sym_eig(&a, 4).unwrap();
            let trace: f64 = (0..4).map(|i| a.get(i, i)).sum();
            let sum: f64 = eig.values.iter().sum();
            let scale = trace.abs().max(a.frobenius()).max(1e-12);
            prop_assert!((sum - trace).abs() <= 1e-10 * scale);
        }

        #[test]
        fn prop_svd_reconstructs(vals in proptest::collection::vec(-5.0f64..5.0, 24)) {
            let x = DataMatrix::from_column_major(6, 4, vals).unwrap();
            let svd = thin_svd(&x).unwrap();
            let rec = svd.reconstruct();
            let mut err = 0.0f64;
            for c in 0..4 {
                for r in 0..6 {
                    let e = rec.get(r, c) - x.as_matrix().get(r, c);
                    err += e * e;
                }
            }
            prop_assert!(err.sqrt() <= 1e-8 * x.as_matrix().frobenius().max(1e-12));
        }
    }
}
