//! Standard PCA on a d × n data matrix, plus the score machinery the bias
//! estimators need: sample scores, prediction scores for new observations,
//! and leave-one-out refits.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{dot, sym_eig, thin_svd, DataMatrix, Matrix};

/// What a score matrix holds; recorded for downstream audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    True,
    Sample,
    Prediction,
    AdjustedSample,
    AdjustedPrediction,
}

impl std::fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScoreKind::True => "true",
            ScoreKind::Sample => "sample",
            ScoreKind::Prediction => "prediction",
            ScoreKind::AdjustedSample => "adjusted-sample",
            ScoreKind::AdjustedPrediction => "adjusted-prediction",
        };
        f.write_str(s)
    }
}

/// m × cols score matrix, one component per row, one observation per column.
#[derive(Debug, Clone)]
pub struct ScoreMatrix {
    values: Matrix,
    kind: ScoreKind,
}

impl ScoreMatrix {
    pub fn new(values: Matrix, kind: ScoreKind) -> Self {
        ScoreMatrix { values, kind }
    }

    pub fn comps(&self) -> usize {
        self.values.rows()
    }

    pub fn cols(&self) -> usize {
        self.values.cols()
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.values.row(i)
    }

    pub fn get(&self, comp: usize, col: usize) -> f64 {
        self.values.get(comp, col)
    }

    /// Same values scaled by a constant (e.g. d^(−1/2)), kind preserved.
    pub fn scaled(&self, s: f64) -> ScoreMatrix {
        ScoreMatrix { values: self.values.scale(s), kind: self.kind }
    }
}

/// A fitted PCA: directions, variances, right singular vectors and the
/// sample scores, with the centering used at fit time.
#[derive(Debug, Clone)]
pub struct PcaFit {
    /// d × r estimated directions û.
    pub directions: Matrix,
    /// Component variances λ̂ᵢ = σᵢ²/n, non-increasing.
    pub variances: Vec<f64>,
    /// n × r right singular vectors v̂.
    pub right_vectors: Matrix,
    /// r × n sample scores ŵᵢ = √(n·λ̂ᵢ)·v̂ᵢ.
    pub sample_scores: Matrix,
    pub centered: bool,
    /// Column mean subtracted at fit time (zeros when `centered` is false).
    pub col_mean: Vec<f64>,
}

impl PcaFit {
    /// Effective number of components retained.
    pub fn rank(&self) -> usize {
        self.variances.len()
    }

    /// Number of variables d.
    pub fn dim(&self) -> usize {
        self.directions.rows()
    }

    /// Number of training observations n.
    pub fn n_obs(&self) -> usize {
        self.right_vectors.rows()
    }
}

/// Fit PCA by thin SVD of the (optionally column-centered) data matrix.
pub fn fit(x: &DataMatrix, center: bool) -> Result<PcaFit> {
    let d = x.rows();
    let n = x.cols();
    if d < 2 || n < 2 {
        return Err(Error::InvalidInput(format!(
            "pca needs d >= 2 and n >= 2, got {d}x{n}"
        )));
    }
    let (work, col_mean) = if center {
        let mean = x.as_matrix().col_mean();
        (DataMatrix::new(x.as_matrix().shift_columns(&mean))?, mean)
    } else {
        (x.clone(), vec![0.0; d])
    };
    let svd = thin_svd(&work)?;
    let nf = n as f64;
    let variances: Vec<f64> = svd.singular.iter().map(|s| s * s / nf).collect();
    let mut sample_scores = Matrix::zeros(svd.rank(), n);
    for i in 0..svd.rank() {
        for j in 0..n {
            sample_scores.set(i, j, svd.singular[i] * svd.right.get(j, i));
        }
    }
    Ok(PcaFit {
        directions: svd.left,
        variances,
        right_vectors: svd.right,
        sample_scores,
        centered: center,
        col_mean,
    })
}

/// First m rows of the sample scores Ŵ.
pub fn sample_scores(fit: &PcaFit, m: usize) -> Result<ScoreMatrix> {
    if m > fit.rank() {
        return Err(Error::RankExceeded { requested: m, rank: fit.rank() });
    }
    let mut values = Matrix::zeros(m, fit.sample_scores.cols());
    for i in 0..m {
        for j in 0..fit.sample_scores.cols() {
            values.set(i, j, fit.sample_scores.get(i, j));
        }
    }
    Ok(ScoreMatrix::new(values, ScoreKind::Sample))
}

/// Prediction scores ŵᵢ* = ûᵢᵀ(X* − col_mean) for new observations.
pub fn predict_scores(fit: &PcaFit, x_new: &DataMatrix, m: usize) -> Result<ScoreMatrix> {
    if x_new.rows() != fit.dim() {
        return Err(Error::DimensionMismatch { expected: fit.dim(), got: x_new.rows() });
    }
    if m > fit.rank() {
        return Err(Error::RankExceeded { requested: m, rank: fit.rank() });
    }
    let shifted = if fit.centered {
        x_new.as_matrix().shift_columns(&fit.col_mean)
    } else {
        x_new.as_matrix().clone()
    };
    let mut values = Matrix::zeros(m, shifted.cols());
    for j in 0..shifted.cols() {
        let col = shifted.col(j);
        for i in 0..m {
            values.set(i, j, dot(fit.directions.col(i), col));
        }
    }
    Ok(ScoreMatrix::new(values, ScoreKind::Prediction))
}

/// The n leave-one-out refits, each on n−1 columns, recomputed from scratch.
///
/// The first m directions of each refit are sign-aligned to the full fit
/// (positive inner product ûₖ₍₋ⱼ₎ᵀûₖ); right vectors and score rows flip
/// along so every refit stays a consistent SVD.
pub fn loo_fits(x: &DataMatrix, m: usize, center: bool) -> Result<Vec<PcaFit>> {
    let n = x.cols();
    if n < m + 2 {
        return Err(Error::InvalidInput(format!(
            "leave-one-out needs n >= m + 2, got n = {n}, m = {m}"
        )));
    }
    let full = fit(x, center)?;
    if m > full.rank() {
        return Err(Error::RankExceeded { requested: m, rank: full.rank() });
    }
    let d = x.rows();
    (0..n)
        .into_par_iter()
        .map(|j| {
            let mut data = Vec::with_capacity(d * (n - 1));
            for c in 0..n {
                if c != j {
                    data.extend_from_slice(x.as_matrix().col(c));
                }
            }
            let sub = DataMatrix::from_column_major(d, n - 1, data)?;
            let mut refit = fit(&sub, center)?;
            if m > refit.rank() {
                return Err(Error::RankExceeded { requested: m, rank: refit.rank() });
            }
            for k in 0..m {
                if dot(refit.directions.col(k), full.directions.col(k)) < 0.0 {
                    refit.directions.scale_col(k, -1.0);
                    refit.right_vectors.scale_col(k, -1.0);
                    refit.sample_scores.scale_row(k, -1.0);
                }
            }
            Ok(refit)
        })
        .collect()
}

/// Leave-one-out prediction scores ŵᵢ₍ⱼ₎ = ûᵢ₍₋ⱼ₎ᵀ(Xⱼ − x̄₍₋ⱼ₎) for
/// i = 1..m, j = 1..n, computed entirely from the n × n Gram matrix.
///
/// This is the fast path behind the jackknife estimators: one Gram matrix
/// plus n small eigendecompositions, no O(d) work per refit. Signs follow
/// each refit's own convention - callers that need magnitudes (the
/// jackknife does) take absolute values.
pub fn loo_prediction_scores(x: &DataMatrix, m: usize, center: bool) -> Result<Matrix> {
    let n = x.cols();
    if n < m + 2 {
        return Err(Error::InvalidInput(format!(
            "leave-one-out needs n >= m + 2, got n = {n}, m = {m}"
        )));
    }
    let gram = x.as_matrix().gram();
    let nt = n - 1;
    let scores: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>> {
            let keep: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            // Gram of the kept columns and their inner products with column j.
            let mut sub = Matrix::zeros(nt, nt);
            for (a, &ka) in keep.iter().enumerate() {
                for (bi, &kb) in keep.iter().enumerate() {
                    sub.set(a, bi, gram.get(ka, kb));
                }
            }
            let mut cross: Vec<f64> = keep.iter().map(|&k| gram.get(k, j)).collect();
            if center {
                let ntf = nt as f64;
                let row_sums: Vec<f64> = (0..nt).map(|a| sub.row(a).iter().sum()).collect();
                let total: f64 = row_sums.iter().sum();
                let cross_sum: f64 = cross.iter().sum();
                for a in 0..nt {
                    for bi in 0..nt {
                        let v = sub.get(a, bi) - row_sums[a] / ntf - row_sums[bi] / ntf
                            + total / (ntf * ntf);
                        sub.set(a, bi, v);
                    }
                }
                for (a, c) in cross.iter_mut().enumerate() {
                    *c = *c - cross_sum / ntf - row_sums[a] / ntf + total / (ntf * ntf);
                }
            }
            let eig = sym_eig(&sub, m)?;
            let mut out = Vec::with_capacity(m);
            for i in 0..m {
                let theta = eig.values[i];
                if theta <= 0.0 {
                    return Err(Error::RankExceeded { requested: m, rank: i });
                }
                out.push(dot(eig.vectors.col(i), &cross) / theta.sqrt());
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut result = Matrix::zeros(m, n);
    for (j, col) in scores.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            result.set(i, j, v);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sample_gaussian, SeededRng};

    fn random_data(seed: u64, d: usize, n: usize) -> DataMatrix {
        sample_gaussian(&SeededRng::new(seed, 0), d, n).unwrap()
    }

    #[test]
    fn fit_orthogonal_columns_exact() {
        // Columns orthogonal with norms (2, 1): variances are (4/2, 1/2).
        let x = DataMatrix::new(Matrix::from_rows(&[
            &[2.0, 0.0],
            &[0.0, 1.0],
            &[0.0, 0.0],
        ]))
        .unwrap();
        let f = fit(&x, false).unwrap();
        assert!((f.variances[0] - 2.0).abs() < 1e-12);
        assert!((f.variances[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sample_scores_match_direct_projection() {
        let x = random_data(9, 100, 20);
        let f = fit(&x, false).unwrap();
        let scores = sample_scores(&f, f.rank()).unwrap();
        for i in 0..f.rank() {
            for j in 0..20 {
                let direct = dot(f.directions.col(i), x.as_matrix().col(j));
                assert!(
                    (scores.get(i, j) - direct).abs() <= 1e-10 * direct.abs().max(1.0),
                    "score ({i},{j}) {} vs projection {direct}",
                    scores.get(i, j)
                );
            }
        }
    }

    #[test]
    fn weighted_right_vector_identity() {
        // Scores are the right singular vectors weighted by √(n·λ̂).
        let x = random_data(13, 100, 20);
        let f = fit(&x, true).unwrap();
        let n = 20.0f64;
        for i in 0..f.rank() {
            let w = (n * f.variances[i]).sqrt();
            for j in 0..20 {
                let expect = w * f.right_vectors.get(j, i);
                assert!((f.sample_scores.get(i, j) - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn variance_sum_matches_covariance_trace() {
        let x = random_data(21, 30, 12);
        let f = fit(&x, false).unwrap();
        let total: f64 = f.variances.iter().sum();
        let trace: f64 = x.as_matrix().data().iter().map(|v| v * v).sum::<f64>() / 12.0;
        assert!((total - trace).abs() <= 1e-8 * trace);
    }

    #[test]
    fn prediction_on_training_columns_matches_sample_scores() {
        let x = random_data(3, 40, 8);
        let f = fit(&x, false).unwrap();
        let pred = predict_scores(&f, &x, f.rank()).unwrap();
        let samp = sample_scores(&f, f.rank()).unwrap();
        for i in 0..f.rank() {
            for j in 0..8 {
                assert!((pred.get(i, j) - samp.get(i, j)).abs() < 1e-10);
            }
        }
        assert_eq!(pred.kind(), ScoreKind::Prediction);
    }

    #[test]
    fn prediction_at_the_mean_is_zero() {
        let x = random_data(7, 25, 10);
        let f = fit(&x, true).unwrap();
        let mean = DataMatrix::from_column_major(25, 1, f.col_mean.clone()).unwrap();
        let pred = predict_scores(&f, &mean, 3).unwrap();
        for i in 0..3 {
            assert!(pred.get(i, 0).abs() < 1e-10);
        }
    }

    #[test]
    fn prediction_rejects_row_mismatch() {
        let x = random_data(5, 20, 6);
        let f = fit(&x, false).unwrap();
        let wrong = random_data(6, 19, 2);
        assert!(matches!(
            predict_scores(&f, &wrong, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_exceeded_reported() {
        let x = random_data(8, 10, 4);
        let f = fit(&x, false).unwrap();
        assert!(matches!(
            sample_scores(&f, 5),
            Err(Error::RankExceeded { requested: 5, .. })
        ));
    }

    #[test]
    fn trailing_eigenvalue_approaches_noise_level() {
        // On tall spiked data the scaled trailing sample variances
        // d⁻¹·n·λ̂ᵢ sit near the noise level 1.
        let spec = crate::simulate::SpikeSpec {
            d: 5000,
            n: 50,
            m: 2,
            sigma_sq: vec![0.02, 0.01],
            beta: 0.3,
            seed: 2,
            rotate_frame: false,
        };
        let ds = crate::simulate::gen_spike(&spec, 1).unwrap();
        let f = fit(&ds.train, false).unwrap();
        let scaled = 50.0 * f.variances[2] / 5000.0;
        assert!(
            (scaled - 1.0).abs() < 0.25,
            "third scaled sample variance {scaled} not within 25% of the noise level"
        );
    }

    #[test]
    fn loo_on_redundant_data_keeps_direction() {
        // All columns identical: dropping any one leaves the fit unchanged.
        let base: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).sin() + 0.5).collect();
        let mut data = Vec::new();
        for _ in 0..5 {
            data.extend_from_slice(&base);
        }
        let x = DataMatrix::from_column_major(20, 5, data).unwrap();
        let full = fit(&x, false).unwrap();
        for refit in loo_fits(&x, 1, false).unwrap() {
            for r in 0..20 {
                assert!(
                    (refit.directions.get(r, 0) - full.directions.get(r, 0)).abs() < 1e-8
                );
            }
        }
    }

    #[test]
    fn loo_gram_path_matches_from_scratch_refits() {
        for center in [false, true] {
            let x = random_data(31, 60, 12);
            let m = 3;
            let fast = loo_prediction_scores(&x, m, center).unwrap();
            let fits = loo_fits(&x, m, center).unwrap();
            for (j, refit) in fits.iter().enumerate() {
                let col = DataMatrix::from_column_major(60, 1, x.as_matrix().col(j).to_vec())
                    .unwrap();
                let pred = predict_scores(refit, &col, m).unwrap();
                for i in 0..m {
                    let a = fast.get(i, j).abs();
                    let b = pred.get(i, 0).abs();
                    assert!(
                        (a - b).abs() <= 1e-10 * b.max(1.0),
                        "center={center} loo score ({i},{j}): gram {a} vs refit {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn loo_needs_enough_columns() {
        let x = random_data(2, 10, 3);
        assert!(loo_fits(&x, 2, false).is_err());
    }
}
