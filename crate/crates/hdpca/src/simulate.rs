//! Data generators for the two reference models, with full oracle truth
//! attached: population spike directions, spike scales, the noise level and
//! the true component scores of every generated column.
//!
//! Both generators are pure functions of their spec. Train and test columns
//! come from separate ChaCha streams, so changing the number of test
//! observations never perturbs the training data.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{sample_gaussian, sym_eig, DataMatrix, Matrix, SeededRng};
use crate::pca::{ScoreKind, ScoreMatrix};

/// Stream layout within one dataset seed.
const STREAM_TRAIN: u64 = 0;
const STREAM_TEST: u64 = 1;
const STREAM_MEANS: u64 = 2;
const STREAM_TRAIN_LABELS: u64 = 3;
const STREAM_TEST_LABELS: u64 = 4;
const STREAM_FRAME: u64 = 5;

/// Spike model: m population eigenvalues σᵢ²·d on top of a polynomially
/// decaying noise spectrum λᵢ = τ·i^(−β) whose mean is forced to 1.
#[derive(Debug, Clone)]
pub struct SpikeSpec {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    /// Spike scales σ₁² ≥ … ≥ σ_m² > 0.
    pub sigma_sq: Vec<f64>,
    /// Noise decay exponent β ≥ 0.
    pub beta: f64,
    pub seed: u64,
    /// Apply a seeded random rotation to the first max(m, 10) coordinates
    /// instead of the identity-aligned frame. Results are rotation-invariant;
    /// the identity frame keeps oracles cheap.
    pub rotate_frame: bool,
}

impl SpikeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.n <= self.m {
            return Err(Error::InvalidSpec(format!(
                "need n > m >= 1, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if self.d <= self.n {
            return Err(Error::InvalidSpec(format!(
                "need d > n, got d = {}, n = {}",
                self.d, self.n
            )));
        }
        if self.sigma_sq.len() != self.m {
            return Err(Error::InvalidSpec(format!(
                "expected {} spike scales, got {}",
                self.m,
                self.sigma_sq.len()
            )));
        }
        if self.sigma_sq.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::InvalidSpec("spike scales must be positive".into()));
        }
        if self.sigma_sq.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec("spike scales must be non-increasing".into()));
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::InvalidSpec("beta must be >= 0".into()));
        }
        Ok(())
    }
}

/// Three-group Gaussian mixture: means with i.i.d. entries from {−a, 0, a},
/// identity noise covariance. Centered, this is a two-spike model.
#[derive(Debug, Clone)]
pub struct MixtureSpec {
    pub d: usize,
    pub n: usize,
    /// Mean entry magnitude.
    pub a: f64,
    /// Group probabilities, summing to 1.
    pub probs: [f64; 3],
    pub seed: u64,
}

impl MixtureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidSpec("mixture model needs n >= 3".into()));
        }
        if self.d <= self.n {
            return Err(Error::InvalidSpec(format!(
                "need d > n, got d = {}, n = {}",
                self.d, self.n
            )));
        }
        if !self.a.is_finite() || self.a < 0.0 {
            return Err(Error::InvalidSpec("entry magnitude a must be >= 0".into()));
        }
        if self.probs.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(Error::InvalidSpec("group probabilities must be positive".into()));
        }
        let total: f64 = self.probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!(
                "group probabilities must sum to 1, got {total}"
            )));
        }
        Ok(())
    }
}

/// Population truth for the training columns.
#[derive(Debug, Clone)]
pub struct OracleTruth {
    /// d × m orthonormal spike directions.
    pub directions: Matrix,
    /// Spike scales σᵢ² = λᵢ/d.
    pub sigma_sq: Vec<f64>,
    /// Noise level τ².
    pub tau_sq: f64,
    /// m × n true scores W, wᵢⱼ = √λᵢ·zᵢⱼ.
    pub true_scores: Matrix,
    /// W₁ = d^(−1/2)·W.
    pub scaled_scores: Matrix,
    /// Group labels (mixture model only).
    pub labels: Option<Vec<usize>>,
}

impl OracleTruth {
    pub fn true_score_matrix(&self) -> ScoreMatrix {
        ScoreMatrix::new(self.true_scores.clone(), ScoreKind::True)
    }

    pub fn scaled_score_matrix(&self) -> ScoreMatrix {
        ScoreMatrix::new(self.scaled_scores.clone(), ScoreKind::True)
    }
}

/// Truth for the test columns.
#[derive(Debug, Clone)]
pub struct TestOracle {
    /// m × n_test true scores.
    pub true_scores: Matrix,
    pub labels: Option<Vec<usize>>,
}

/// One generated dataset: training block, independent test block, and the
/// population quantities behind both.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub train: DataMatrix,
    pub test: DataMatrix,
    pub oracle: OracleTruth,
    pub oracle_test: TestOracle,
    /// Full population eigenvalue sequence λ₁ ≥ … ≥ λ_d.
    pub population_eigs: Vec<f64>,
}

/// Generate from the spike model.
///
/// Population eigenvalues are λᵢ = σᵢ²·d for the m spikes and λᵢ = τ·i^(−β)
/// beyond, with τ fixed so the noise eigenvalues average exactly 1 (the
/// noise index starts at m+1, generalizing the two-spike reference setup).
pub fn gen_spike(spec: &SpikeSpec, n_test: usize) -> Result<Dataset> {
    spec.validate()?;
    if n_test == 0 {
        return Err(Error::InvalidSpec("n_test must be >= 1".into()));
    }
    let (d, n, m) = (spec.d, spec.n, spec.m);

    let mut eigs = Vec::with_capacity(d);
    for i in 0..m {
        eigs.push(spec.sigma_sq[i] * d as f64);
    }
    // tau scaling: mean of lambda_{m+1..d} is exactly 1.
    let decay_sum: f64 = (m + 1..=d).map(|i| (i as f64).powf(-spec.beta)).sum();
    let tau_scale = (d - m) as f64 / decay_sum;
    for i in m + 1..=d {
        eigs.push(tau_scale * (i as f64).powf(-spec.beta));
    }
    let tau_sq = eigs[m..].iter().sum::<f64>() / d as f64;

    let sqrt_eigs: Vec<f64> = eigs.iter().map(|l| l.sqrt()).collect();
    let frame = if spec.rotate_frame {
        Some(random_rotation(m.max(10).min(d), SeededRng::new(spec.seed, STREAM_FRAME))?)
    } else {
        None
    };

    let build_block = |stream: u64, cols: usize| -> Result<(DataMatrix, Matrix)> {
        let z = sample_gaussian(&SeededRng::new(spec.seed, stream), d, cols)?;
        let mut x = z.into_matrix();
        let mut scores = Matrix::zeros(m, cols);
        for c in 0..cols {
            let col = x.col_mut(c);
            for (v, &s) in col.iter_mut().zip(&sqrt_eigs) {
                *v *= s;
            }
            for i in 0..m {
                scores.set(i, c, col[i]);
            }
        }
        if let Some(q) = &frame {
            rotate_leading_rows(&mut x, q);
        }
        Ok((DataMatrix::new(x)?, scores))
    };

    let (train, true_scores) = build_block(STREAM_TRAIN, n)?;
    let (test, test_scores) = build_block(STREAM_TEST, n_test)?;

    let mut directions = Matrix::zeros(d, m);
    match &frame {
        None => {
            for i in 0..m {
                directions.set(i, i, 1.0);
            }
        }
        Some(q) => {
            for i in 0..m {
                for r in 0..q.rows() {
                    directions.set(r, i, q.get(r, i));
                }
            }
        }
    }

    let scaled_scores = true_scores.scale(1.0 / (d as f64).sqrt());
    Ok(Dataset {
        train,
        test,
        oracle: OracleTruth {
            directions,
            sigma_sq: spec.sigma_sq.clone(),
            tau_sq,
            true_scores,
            scaled_scores,
            labels: None,
        },
        oracle_test: TestOracle { true_scores: test_scores, labels: None },
        population_eigs: eigs,
    })
}

/// Generate from the mixture model.
///
/// The spike part of the oracle comes from the 3 × 3 Gram matrix of the
/// weighted centered means √p_g·(μ_g − μ̄): its two nonzero eigenpairs give
/// the rank-2 spike of the population covariance I_d + Σ p_g(μ_g−μ̄)(μ_g−μ̄)ᵀ
/// without any d × d work. True scores are taken against the population
/// mean μ̄.
pub fn gen_mixture(spec: &MixtureSpec, n_test: usize) -> Result<Dataset> {
    spec.validate()?;
    if n_test == 0 {
        return Err(Error::InvalidSpec("n_test must be >= 1".into()));
    }
    if spec.a == 0.0 {
        return Err(Error::DegenerateSpike);
    }
    let (d, n) = (spec.d, spec.n);
    let m = 2usize;

    // Group means, drawn once and then fixed.
    let means = mixture_means(spec);
    let mut mu_bar = vec![0.0f64; d];
    for g in 0..3 {
        for (acc, &v) in mu_bar.iter_mut().zip(means.col(g)) {
            *acc += spec.probs[g] * v;
        }
    }

    // Weighted centered means and their 3x3 Gram.
    let mut b = Matrix::zeros(d, 3);
    for g in 0..3 {
        let w = spec.probs[g].sqrt();
        for r in 0..d {
            b.set(r, g, w * (means.get(r, g) - mu_bar[r]));
        }
    }
    let gram = b.gram();
    let eig = sym_eig(&gram, 3)?;
    let nu = [eig.values[0].max(0.0), eig.values[1].max(0.0)];
    if nu[1] <= 1e-12 * nu[0].max(1.0) {
        return Err(Error::DegenerateSpike);
    }

    let mut directions = Matrix::zeros(d, m);
    for i in 0..m {
        let q: Vec<f64> = eig.vectors.col(i).to_vec();
        let mut norm_sq = 0.0;
        for r in 0..d {
            let mut v = 0.0;
            for g in 0..3 {
                v += b.get(r, g) * q[g];
            }
            directions.set(r, i, v);
            norm_sq += v * v;
        }
        let inv = 1.0 / norm_sq.sqrt();
        for r in 0..d {
            directions.set(r, i, directions.get(r, i) * inv);
        }
    }

    let sigma_sq: Vec<f64> = nu.iter().map(|v| (v + 1.0) / d as f64).collect();
    let tau_sq = 1.0;

    let sample_block = |label_stream: u64, noise_stream: u64, cols: usize| -> Result<(DataMatrix, Matrix, Vec<usize>)> {
        let mut label_rng = SeededRng::new(spec.seed, label_stream).build();
        let labels: Vec<usize> = (0..cols)
            .map(|_| {
                let u: f64 = label_rng.gen();
                if u < spec.probs[0] {
                    0
                } else if u < spec.probs[0] + spec.probs[1] {
                    1
                } else {
                    2
                }
            })
            .collect();
        let noise = sample_gaussian(&SeededRng::new(spec.seed, noise_stream), d, cols)?;
        let mut x = noise.into_matrix();
        for (c, &g) in labels.iter().enumerate() {
            let mu = means.col(g);
            for (v, &mv) in x.col_mut(c).iter_mut().zip(mu) {
                *v += mv;
            }
        }
        // True scores against the population mean.
        let mut scores = Matrix::zeros(m, cols);
        for c in 0..cols {
            let col = x.col(c);
            for i in 0..m {
                let mut s = 0.0;
                for r in 0..d {
                    s += directions.get(r, i) * (col[r] - mu_bar[r]);
                }
                scores.set(i, c, s);
            }
        }
        Ok((DataMatrix::new(x)?, scores, labels))
    };

    let (train, true_scores, labels) = sample_block(STREAM_TRAIN_LABELS, STREAM_TRAIN, n)?;
    let (test, test_scores, test_labels) = sample_block(STREAM_TEST_LABELS, STREAM_TEST, n_test)?;

    let mut population_eigs = vec![1.0f64; d];
    population_eigs[0] = nu[0] + 1.0;
    population_eigs[1] = nu[1] + 1.0;

    let scaled_scores = true_scores.scale(1.0 / (d as f64).sqrt());
    Ok(Dataset {
        train,
        test,
        oracle: OracleTruth {
            directions,
            sigma_sq,
            tau_sq,
            true_scores,
            scaled_scores,
            labels: Some(labels),
        },
        oracle_test: TestOracle { true_scores: test_scores, labels: Some(test_labels) },
        population_eigs,
    })
}

/// The three mixture mean vectors for a spec, entries i.i.d. on {−a, 0, a}.
pub(crate) fn mixture_means(spec: &MixtureSpec) -> Matrix {
    let mut mean_rng = SeededRng::new(spec.seed, STREAM_MEANS).build();
    let mut means = Matrix::zeros(spec.d, 3);
    for g in 0..3 {
        let col = means.col_mut(g);
        for v in col.iter_mut() {
            *v = match mean_rng.gen_range(0..3u32) {
                0 => -spec.a,
                1 => 0.0,
                _ => spec.a,
            };
        }
    }
    means
}

/// Random q × q orthogonal matrix (left factor of a Gaussian draw).
fn random_rotation(q: usize, rng: SeededRng) -> Result<Matrix> {
    let g = sample_gaussian(&rng, q, q)?;
    let svd = crate::numerics::thin_svd(&g)?;
    if svd.rank() < q {
        // A singular Gaussian draw has probability zero; re-draw deterministically.
        return random_rotation(q, rng.stream(rng.stream_id + 101));
    }
    Ok(svd.left)
}

/// Rotate the first q rows of x by q × q matrix `rot` in place.
fn rotate_leading_rows(x: &mut Matrix, rot: &Matrix) {
    let q = rot.rows();
    let mut buf = vec![0.0f64; q];
    for c in 0..x.cols() {
        let col = x.col_mut(c);
        for (i, b) in buf.iter_mut().enumerate() {
            let mut s = 0.0;
            for (k, ck) in col[..q].iter().enumerate() {
                s += rot.get(i, k) * ck;
            }
            *b = s;
        }
        col[..q].copy_from_slice(&buf);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_spike(d: usize, n: usize, seed: u64) -> SpikeSpec {
        SpikeSpec {
            d,
            n,
            m: 2,
            sigma_sq: vec![0.02, 0.01],
            beta: 0.3,
            seed,
            rotate_frame: false,
        }
    }

    #[test]
    fn spike_population_eigenvalues() {
        let ds = gen_spike(&reference_spike(10_000, 50, 1), 5).unwrap();
        assert!((ds.population_eigs[0] - 200.0).abs() < 1e-9);
        assert!((ds.population_eigs[1] - 100.0).abs() < 1e-9);
        let noise_mean: f64 =
            ds.population_eigs[2..].iter().sum::<f64>() / (ds.population_eigs.len() - 2) as f64;
        assert!((noise_mean - 1.0).abs() < 1e-12, "noise mean {noise_mean}");
        for w in ds.population_eigs[2..].windows(2) {
            assert!(w[0] >= w[1], "noise eigenvalues must decay");
        }
    }

    #[test]
    fn spike_flat_decay_gives_unit_noise() {
        let mut spec = reference_spike(300, 20, 2);
        spec.beta = 0.0;
        let ds = gen_spike(&spec, 3).unwrap();
        for &l in &ds.population_eigs[2..] {
            assert!((l - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spike_noise_coordinate_variances_average_to_one() {
        let ds = gen_spike(&reference_spike(5_000, 200, 3), 2).unwrap();
        let x = ds.train.as_matrix();
        let mut acc = 0.0;
        for r in 2..x.rows() {
            let mut s = 0.0;
            for c in 0..x.cols() {
                let v = x.get(r, c);
                s += v * v;
            }
            acc += s / x.cols() as f64;
        }
        let avg = acc / (x.rows() - 2) as f64;
        assert!((avg - 1.0).abs() < 0.02, "noise variance average {avg}");
    }

    #[test]
    fn spike_true_score_variance_tracks_population() {
        // Pooled over 20 seeds to reach an n = 10000 equivalent.
        let mut pooled = [0.0f64; 2];
        let mut count = 0usize;
        for seed in 0..20 {
            let ds = gen_spike(&reference_spike(600, 500, 100 + seed), 2).unwrap();
            for i in 0..2 {
                for j in 0..500 {
                    let w = ds.oracle.true_scores.get(i, j);
                    pooled[i] += w * w;
                }
            }
            count += 500;
        }
        for i in 0..2 {
            let var = pooled[i] / count as f64;
            let lambda = [0.02 * 600.0, 0.01 * 600.0][i];
            assert!(
                (var / lambda - 1.0).abs() < 0.03,
                "component {i}: score variance {var} vs population {lambda}"
            );
        }
    }

    #[test]
    fn rotated_frame_directions_orthonormal() {
        let mut spec = reference_spike(500, 30, 4);
        spec.rotate_frame = true;
        let ds = gen_spike(&spec, 3).unwrap();
        let u = &ds.oracle.directions;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                let got = crate::numerics::dot(u.col(i), u.col(j));
                assert!((got - expect).abs() < 1e-10);
            }
        }
        // Rotation leaves true scores equal to the projections on the frame.
        for j in 0..5 {
            for i in 0..2 {
                let proj = crate::numerics::dot(u.col(i), ds.train.as_matrix().col(j));
                assert!((proj - ds.oracle.true_scores.get(i, j)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn train_stream_independent_of_test_size() {
        let a = gen_spike(&reference_spike(400, 25, 9), 5).unwrap();
        let b = gen_spike(&reference_spike(400, 25, 9), 50).unwrap();
        assert_eq!(a.train.as_matrix().data(), b.train.as_matrix().data());
        assert_eq!(a.oracle.true_scores.data(), b.oracle.true_scores.data());
    }

    #[test]
    fn scaled_scores_are_exactly_rescaled() {
        let ds = gen_spike(&reference_spike(400, 25, 10), 3).unwrap();
        let c = 1.0 / (400f64).sqrt();
        for j in 0..25 {
            for i in 0..2 {
                assert_eq!(
                    ds.oracle.scaled_scores.get(i, j),
                    ds.oracle.true_scores.get(i, j) * c
                );
            }
        }
    }

    #[test]
    fn spike_spec_validation() {
        let mut bad = reference_spike(100, 50, 1);
        bad.m = 50;
        bad.sigma_sq = vec![0.01; 50];
        assert!(matches!(gen_spike(&bad, 2), Err(Error::InvalidSpec(_))));
        let mut shallow = reference_spike(40, 50, 1);
        shallow.d = 40;
        assert!(matches!(gen_spike(&shallow, 2), Err(Error::InvalidSpec(_))));
    }

    fn reference_mixture(d: usize, n: usize, seed: u64) -> MixtureSpec {
        MixtureSpec { d, n, a: 0.15, probs: [0.5, 0.3, 0.2], seed }
    }

    #[test]
    fn mixture_smoke() {
        let ds = gen_mixture(&reference_mixture(500, 40, 5), 10).unwrap();
        assert_eq!(ds.train.rows(), 500);
        assert_eq!(ds.train.cols(), 40);
        assert_eq!(ds.oracle.sigma_sq.len(), 2);
        assert!(ds.oracle.sigma_sq[0] >= ds.oracle.sigma_sq[1]);
        assert_eq!(ds.oracle.tau_sq, 1.0);
        let labels = ds.oracle.labels.as_ref().unwrap();
        assert_eq!(labels.len(), 40);
        assert!(labels.iter().all(|&g| g < 3));
        let u = &ds.oracle.directions;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((crate::numerics::dot(u.col(i), u.col(j)) - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn mixture_zero_magnitude_is_degenerate() {
        let mut spec = reference_mixture(300, 20, 1);
        spec.a = 0.0;
        assert!(matches!(gen_mixture(&spec, 2), Err(Error::DegenerateSpike)));
    }

    #[test]
    fn mixture_gram_construction_matches_brute_force() {
        let spec = reference_mixture(200, 20, 7);
        let ds = gen_mixture(&spec, 2).unwrap();
        // Brute force: eigendecompose the full population covariance.
        let means = mixture_means(&spec);
        let mut mu_bar = vec![0.0f64; 200];
        for g in 0..3 {
            for (acc, &v) in mu_bar.iter_mut().zip(means.col(g)) {
                *acc += spec.probs[g] * v;
            }
        }
        let mut cov = Matrix::identity(200);
        for g in 0..3 {
            for r in 0..200 {
                for c in 0..200 {
                    let v = cov.get(r, c)
                        + spec.probs[g] * (means.get(r, g) - mu_bar[r]) * (means.get(c, g) - mu_bar[c]);
                    cov.set(r, c, v);
                }
            }
        }
        let eig = sym_eig(&cov, 3).unwrap();
        for i in 0..2 {
            let rel = (eig.values[i] - ds.population_eigs[i]).abs() / eig.values[i];
            assert!(
                rel < 1e-8,
                "spike {i}: brute force {} vs gram construction {}",
                eig.values[i],
                ds.population_eigs[i]
            );
        }
        // Third population eigenvalue is the unit noise floor.
        assert!((eig.values[2] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mixture_probs_must_sum_to_one() {
        let mut spec = reference_mixture(100, 10, 1);
        spec.probs = [0.5, 0.3, 0.3];
        assert!(matches!(gen_mixture(&spec, 2), Err(Error::InvalidSpec(_))));
    }
}
