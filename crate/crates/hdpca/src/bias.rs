//! Scaling/rotation bias of PC scores: the theoretical quantities computed
//! from oracle truth, the data-side estimators of the scaling factors, score
//! adjustment, and the asymptotic limits used as test oracles.
//!
//! The central objects: 𝒲 = W₁W₁ᵀ is the m × m second-moment matrix of the
//! scaled true scores, R collects its eigenvectors, and the per-component
//! scaling factor is ρ_k = √(1 + τ²/λ_k(𝒲)). Sample scores are stretched by
//! ρ_k, prediction scores shrunk by 1/ρ_k, and both are rotated by R.

use crate::error::{Error, Result};
use crate::numerics::{dot, sym_eig, DataMatrix, Matrix};
use crate::pca::{self, PcaFit, ScoreKind, ScoreMatrix};
use crate::simulate::OracleTruth;

/// Where a set of bias factors came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Theory,
    Asymptotic,
    Jackknife1,
    Jackknife2,
    Jackknife3,
    Lzw,
    Procrustes,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Provenance::Theory => "theory",
            Provenance::Asymptotic => "asymptotic",
            Provenance::Jackknife1 => "jackknife1",
            Provenance::Jackknife2 => "jackknife2",
            Provenance::Jackknife3 => "jackknife3",
            Provenance::Lzw => "lzw",
            Provenance::Procrustes => "procrustes",
        };
        f.write_str(s)
    }
}

/// Second-moment matrix of scaled scores with its eigendecomposition.
#[derive(Debug, Clone)]
pub struct ScoreCov {
    /// 𝒲 = W₁W₁ᵀ, m × m.
    pub matrix: Matrix,
    /// λ_k(𝒲), non-increasing.
    pub eigenvalues: Vec<f64>,
    /// R = [v₁(𝒲) … v_m(𝒲)], the rotation-bias matrix.
    pub eigenvectors: Matrix,
}

/// Per-component scaling factors with optional rotation.
#[derive(Debug, Clone)]
pub struct BiasFactors {
    pub rho: Vec<f64>,
    pub rotation: Option<Matrix>,
    pub provenance: Provenance,
}

impl BiasFactors {
    /// True when any factor dropped below 1 (estimator undershoot; flagged,
    /// never an error).
    pub fn undershoot(&self) -> bool {
        self.rho.iter().any(|r| *r < 1.0)
    }
}

/// 𝒲 and its eigenpairs for an m × n matrix of scaled true scores.
pub fn score_cov(w1: &ScoreMatrix) -> Result<ScoreCov> {
    let m = w1.comps();
    let n = w1.cols();
    if m >= n {
        return Err(Error::InvalidInput(format!(
            "score covariance needs m < n, got m = {m}, n = {n}"
        )));
    }
    let mut cov = Matrix::zeros(m, m);
    for i in 0..m {
        let ri = w1.row(i);
        for j in i..m {
            let v = dot(&ri, &w1.row(j));
            cov.set(i, j, v);
            cov.set(j, i, v);
        }
    }
    let eig = sym_eig(&cov, m)?;
    Ok(ScoreCov { matrix: cov, eigenvalues: eig.values, eigenvectors: eig.vectors })
}

/// Oracle scaling factors ρ_k = √(1 + τ²/λ_k(𝒲)) with rotation R.
pub fn rho_theory(cov: &ScoreCov, tau_sq: f64) -> Result<BiasFactors> {
    let mut rho = Vec::with_capacity(cov.eigenvalues.len());
    for (k, &l) in cov.eigenvalues.iter().enumerate() {
        if l <= 0.0 {
            return Err(Error::DegenerateSignal {
                component: k + 1,
                detail: format!("score covariance eigenvalue {l} is not positive"),
            });
        }
        rho.push((1.0 + tau_sq / l).sqrt());
    }
    Ok(BiasFactors {
        rho,
        rotation: Some(cov.eigenvectors.clone()),
        provenance: Provenance::Theory,
    })
}

/// Noise-level estimate τ̃² = (Σ_{i=m+1..n} λ̂ᵢ / (n−m)) · (n/d).
///
/// Eigenvalues beyond the fit rank count as zero.
fn tau_sq_estimate(fit: &PcaFit, m: usize, d: usize) -> f64 {
    let n = fit.n_obs();
    let mut sum = 0.0;
    for i in m..n {
        sum += fit.variances.get(i).copied().unwrap_or(0.0);
    }
    (sum / (n - m) as f64) * (n as f64 / d as f64)
}

/// Plug-in estimator: τ̃², λ̃ᵢ(𝒲) = d⁻¹·n·λ̂ᵢ − τ̃², ρ̃ᵢ = √(1 + τ̃²/λ̃ᵢ(𝒲)).
pub fn rho_asymptotic(fit: &PcaFit, m: usize, d: usize) -> Result<BiasFactors> {
    let n = fit.n_obs();
    if m >= n {
        return Err(Error::InvalidInput(format!(
            "estimator needs m < n (it averages the n−m trailing eigenvalues), got m = {m}, n = {n}"
        )));
    }
    if m > fit.rank() {
        return Err(Error::RankExceeded { requested: m, rank: fit.rank() });
    }
    let tau = tau_sq_estimate(fit, m, d);
    let scale = n as f64 / d as f64;
    let mut rho = Vec::with_capacity(m);
    for i in 0..m {
        let lam_w = scale * fit.variances[i] - tau;
        if lam_w <= 0.0 {
            return Err(Error::DegenerateSignal {
                component: i + 1,
                detail: format!("estimated signal variance {lam_w} is not separable from noise"),
            });
        }
        rho.push((1.0 + tau / lam_w).sqrt());
    }
    Ok(BiasFactors { rho, rotation: None, provenance: Provenance::Asymptotic })
}

/// Which of the three jackknife ratio forms to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JackknifeVariant {
    /// Mean over j of √(|ŵᵢⱼ| / |ŵᵢ₍ⱼ₎|).
    V1,
    /// √(Σⱼ|ŵᵢⱼ| / Σⱼ|ŵᵢ₍ⱼ₎|).
    V2,
    /// (Σⱼŵ²ᵢⱼ / Σⱼŵ²ᵢ₍ⱼ₎)^(1/4).
    V3,
}

impl JackknifeVariant {
    pub fn provenance(&self) -> Provenance {
        match self {
            JackknifeVariant::V1 => Provenance::Jackknife1,
            JackknifeVariant::V2 => Provenance::Jackknife2,
            JackknifeVariant::V3 => Provenance::Jackknife3,
        }
    }
}

/// Jackknife estimator from explicit leave-one-out refits.
///
/// `loo[j]` must be the fit on the data without column j of `x`; the ratio
/// pairs |ŵᵢⱼ| (full-fit sample score) and |ŵᵢ₍ⱼ₎| (held-out prediction
/// score) feed the selected variant.
pub fn rho_jackknife(
    fit: &PcaFit,
    loo: &[PcaFit],
    x: &DataMatrix,
    m: usize,
    variant: JackknifeVariant,
) -> Result<BiasFactors> {
    let n = x.cols();
    if loo.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} leave-one-out fits, got {}",
            loo.len()
        )));
    }
    if m > fit.rank() {
        return Err(Error::RankExceeded { requested: m, rank: fit.rank() });
    }
    let mut loo_scores = Matrix::zeros(m, n);
    for (j, refit) in loo.iter().enumerate() {
        let col = DataMatrix::from_column_major(x.rows(), 1, x.as_matrix().col(j).to_vec())?;
        let pred = pca::predict_scores(refit, &col, m)?;
        for i in 0..m {
            loo_scores.set(i, j, pred.get(i, 0));
        }
    }
    rho_jackknife_from_scores(&fit.sample_scores, &loo_scores, variant)
}

/// Jackknife estimator via the Gram-matrix leave-one-out path (no O(d) work
/// per refit). Same result as [`rho_jackknife`] up to floating-point noise.
pub fn rho_jackknife_gram(
    fit: &PcaFit,
    x: &DataMatrix,
    m: usize,
    variant: JackknifeVariant,
) -> Result<BiasFactors> {
    if m > fit.rank() {
        return Err(Error::RankExceeded { requested: m, rank: fit.rank() });
    }
    let loo_scores = pca::loo_prediction_scores(x, m, fit.centered)?;
    rho_jackknife_from_scores(&fit.sample_scores, &loo_scores, variant)
}

/// Shared jackknife core on |sample| and |leave-one-out| score magnitudes.
///
/// For variant 1, a ratio whose denominator falls below
/// δ = 1e-8 · median(|ŵᵢ·|) is excluded from the average; it is an error
/// only if every term is excluded.
pub fn rho_jackknife_from_scores(
    sample_scores: &Matrix,
    loo_scores: &Matrix,
    variant: JackknifeVariant,
) -> Result<BiasFactors> {
    let m = loo_scores.rows();
    let n = loo_scores.cols();
    let mut rho = Vec::with_capacity(m);
    for i in 0..m {
        let s: Vec<f64> = (0..n).map(|j| sample_scores.get(i, j).abs()).collect();
        let p: Vec<f64> = (0..n).map(|j| loo_scores.get(i, j).abs()).collect();
        let value = match variant {
            JackknifeVariant::V1 => {
                let delta = 1e-8 * median(&s);
                let mut acc = 0.0;
                let mut kept = 0usize;
                for j in 0..n {
                    if p[j] < delta || p[j] == 0.0 {
                        continue;
                    }
                    acc += (s[j] / p[j]).sqrt();
                    kept += 1;
                }
                if kept == 0 {
                    return Err(Error::DegenerateScore { component: i + 1 });
                }
                acc / kept as f64
            }
            JackknifeVariant::V2 => {
                let num: f64 = s.iter().sum();
                let den: f64 = p.iter().sum();
                if den == 0.0 {
                    return Err(Error::DegenerateScore { component: i + 1 });
                }
                (num / den).sqrt()
            }
            JackknifeVariant::V3 => {
                let num: f64 = s.iter().map(|v| v * v).sum();
                let den: f64 = p.iter().map(|v| v * v).sum();
                if den == 0.0 {
                    return Err(Error::DegenerateScore { component: i + 1 });
                }
                (num / den).powf(0.25)
            }
        };
        rho.push(value);
    }
    Ok(BiasFactors { rho, rotation: None, provenance: variant.provenance() })
}

/// Closed-form shrinkage-factor approximation from random-matrix theory.
///
/// Sample eigenvalues are first expressed on the unit-noise scale,
/// λᵢⁿᵒʳᵐ = n·λ̂ᵢ/(d·τ̃²), then converted to the raw spiked-model scale
/// λᵢᴸ = γ·(λᵢⁿᵒʳᵐ − 1) with aspect ratio γ = d/n, and the factor is
/// ρᵢ = √((λᵢᴸ + γ − 1)/(λᵢᴸ − 1)). Signals at or below λᵢᴸ = 1 sit under
/// the detectability threshold of this regime and are rejected.
pub fn rho_lzw(fit: &PcaFit, m: usize, d: usize) -> Result<BiasFactors> {
    let n = fit.n_obs();
    if m >= n {
        return Err(Error::InvalidInput(format!(
            "estimator needs m < n, got m = {m}, n = {n}"
        )));
    }
    if m > fit.rank() {
        return Err(Error::RankExceeded { requested: m, rank: fit.rank() });
    }
    let tau = tau_sq_estimate(fit, m, d);
    if tau <= 0.0 {
        return Err(Error::DegenerateSignal {
            component: 0,
            detail: "noise level estimate is zero".into(),
        });
    }
    let gamma = d as f64 / n as f64;
    let mut rho = Vec::with_capacity(m);
    for i in 0..m {
        let lam_norm = (n as f64) * fit.variances[i] / (d as f64 * tau);
        let lam_raw = gamma * (lam_norm - 1.0);
        if lam_raw <= 1.0 {
            return Err(Error::DegenerateSignal {
                component: i + 1,
                detail: format!("normalized eigenvalue {lam_raw} is below the detectability threshold"),
            });
        }
        rho.push(((lam_raw + gamma - 1.0) / (lam_raw - 1.0)).sqrt());
    }
    Ok(BiasFactors { rho, rotation: None, provenance: Provenance::Lzw })
}

/// Bias-adjust scores: sample rows are divided by ρᵢ, prediction rows
/// multiplied by ρᵢ, and the kind is updated to the adjusted variant.
pub fn adjust(scores: &ScoreMatrix, factors: &BiasFactors) -> Result<ScoreMatrix> {
    if factors.rho.len() != scores.comps() {
        return Err(Error::InvalidInput(format!(
            "got {} factors for {} components",
            factors.rho.len(),
            scores.comps()
        )));
    }
    let new_kind = match scores.kind() {
        ScoreKind::Sample => ScoreKind::AdjustedSample,
        ScoreKind::Prediction => ScoreKind::AdjustedPrediction,
        other => {
            return Err(Error::InvalidKind {
                expected: "sample or prediction".into(),
                got: other.to_string(),
            })
        }
    };
    let mut values = scores.values().clone();
    for (i, &r) in factors.rho.iter().enumerate() {
        let s = if scores.kind() == ScoreKind::Sample { 1.0 / r } else { r };
        values.scale_row(i, s);
    }
    Ok(ScoreMatrix::new(values, new_kind))
}

/// The biased sample-score target S·Rᵀ·W₁ of the oracle bias relation.
///
/// `factors` must carry a rotation (theory provenance); `w1` is the m × n
/// matrix of scaled true scores.
pub fn biased_sample_target(factors: &BiasFactors, w1: &Matrix) -> Result<Matrix> {
    biased_target(factors, w1, false)
}

/// The biased prediction-score target S⁻¹·Rᵀ·W₊ for scaled true scores of
/// new observations.
pub fn biased_prediction_target(factors: &BiasFactors, w_star: &Matrix) -> Result<Matrix> {
    biased_target(factors, w_star, true)
}

fn biased_target(factors: &BiasFactors, w: &Matrix, invert: bool) -> Result<Matrix> {
    let rotation = factors.rotation.as_ref().ok_or_else(|| {
        Error::InvalidInput("bias factors carry no rotation matrix".into())
    })?;
    if rotation.cols() != w.rows() {
        return Err(Error::DimensionMismatch { expected: rotation.cols(), got: w.rows() });
    }
    let mut out = rotation.tr_mul(w);
    for (i, &r) in factors.rho.iter().enumerate() {
        out.scale_row(i, if invert { 1.0 / r } else { r });
    }
    Ok(out)
}

/// Per-row signs (±1) aligning `estimated` to `target`: estimated score
/// rows inherit the arbitrary sign of their singular vectors, so comparisons
/// against the theoretical bias relation flip each row to positive
/// correlation with its target counterpart first. A zero inner product
/// yields +1.
pub fn row_signs_to_target(estimated: &Matrix, target: &Matrix) -> Vec<f64> {
    (0..estimated.rows())
        .map(|i| {
            let inner = dot(&estimated.row(i), &target.row(i));
            if inner < 0.0 {
                -1.0
            } else {
                1.0
            }
        })
        .collect()
}

/// Asymptotic limits derived from oracle truth, used as test oracles.
#[derive(Debug, Clone)]
pub struct TheoryLimits {
    pub tau_sq: f64,
    /// υ_O² = d⁻¹·Σ_{i>m} λᵢ² at the finite d.
    pub upsilon_sq: f64,
    /// Limit of r(ŵ_k, w_j): entry (k, j) is v_kj(𝒲)·ζ_kj^(1/2).
    pub sample_corr_limits: Matrix,
    /// Limit of Corr(ŵ_k*, w_j* | W₁): entry (k, j) is v_kj(𝒲)·ζ̄_kj^(1/2).
    pub prediction_corr_limits: Matrix,
    /// Limit of Var(ε_k* | W₁) for k ≤ m: υ_O²/(λ_k(𝒲) + τ²).
    pub eps_var: Vec<f64>,
    /// Limit of the k > m average of Var(ε_k* | W₁): υ_O²/τ².
    pub eps_var_noise_avg: f64,
    /// Limit of ûᵢᵀuᵢ: ρᵢ⁻¹·vᵢᵢ(𝒲).
    pub inner_prod_limits: Vec<f64>,
    /// Limit of d⁻¹·n·λ̂ᵢ for i ≤ m: λᵢ(𝒲) + τ².
    pub eigval_limits: Vec<f64>,
    /// Limit of d⁻¹·n·λ̂ᵢ for i > m: τ².
    pub noise_eigval_limit: f64,
    /// ξ_k(𝒲) = Σ_{ℓ≠k} v²_ℓk(𝒲)·λ_ℓ(𝒲)/λ_k(𝒲), the sample-size artifact
    /// in the diagonal correlation limit (diagnostic only).
    pub xi: Vec<f64>,
}

/// Compute every limit in [`TheoryLimits`] from the oracle and the realized
/// score covariance. `population_eigs` is the full eigenvalue sequence.
pub fn theory_limits(
    oracle: &OracleTruth,
    cov: &ScoreCov,
    population_eigs: &[f64],
) -> TheoryLimits {
    let m = cov.eigenvalues.len();
    let d = population_eigs.len();
    let tau_sq = oracle.tau_sq;
    let upsilon_sq = population_eigs[m..].iter().map(|l| l * l).sum::<f64>() / d as f64;

    // v_kj is the j-th loading of the k-th eigenvector: eigenvectors (j, k).
    let loading = |k: usize, j: usize| cov.eigenvectors.get(j, k);

    let mut sample_corr = Matrix::zeros(m, m);
    let mut pred_corr = Matrix::zeros(m, m);
    for j in 0..m {
        let mut denom_sample = 0.0;
        let mut denom_pred = 0.0;
        for l in 0..m {
            let v = loading(l, j);
            denom_sample += v * v * cov.eigenvalues[l];
            denom_pred += v * v * oracle.sigma_sq[l];
        }
        for k in 0..m {
            let zeta = cov.eigenvalues[k] / denom_sample;
            let zeta_bar = oracle.sigma_sq[k] / denom_pred;
            sample_corr.set(k, j, loading(k, j) * zeta.sqrt());
            pred_corr.set(k, j, loading(k, j) * zeta_bar.sqrt());
        }
    }

    let eps_var: Vec<f64> =
        cov.eigenvalues.iter().map(|l| upsilon_sq / (l + tau_sq)).collect();

    let mut inner_prod = Vec::with_capacity(m);
    let mut eigval = Vec::with_capacity(m);
    let mut xi = Vec::with_capacity(m);
    for k in 0..m {
        let rho_k = (1.0 + tau_sq / cov.eigenvalues[k]).sqrt();
        inner_prod.push(loading(k, k) / rho_k);
        eigval.push(cov.eigenvalues[k] + tau_sq);
        let mut x = 0.0;
        for l in 0..m {
            if l != k {
                let v = loading(l, k);
                x += v * v * cov.eigenvalues[l] / cov.eigenvalues[k];
            }
        }
        xi.push(x);
    }

    TheoryLimits {
        tau_sq,
        upsilon_sq,
        sample_corr_limits: sample_corr,
        prediction_corr_limits: pred_corr,
        eps_var,
        eps_var_noise_avg: upsilon_sq / tau_sq,
        inner_prod_limits: inner_prod,
        eigval_limits: eigval,
        noise_eigval_limit: tau_sq,
        xi,
    }
}

/// First-order relative inflation of the spike variance estimates:
/// E(λ̂ᵢ/λᵢ) ≈ 1 + n⁻¹·(Σ_{j≠i} σⱼ²/(σᵢ²−σⱼ²) + τ²/σᵢ²).
pub fn eigen_inflation(sigma_sq: &[f64], tau_sq: f64, n: usize) -> Result<Vec<f64>> {
    for i in 0..sigma_sq.len() {
        for j in (i + 1)..sigma_sq.len() {
            if sigma_sq[i] == sigma_sq[j] {
                return Err(Error::DegenerateSpectrum);
            }
        }
    }
    let nf = n as f64;
    Ok(sigma_sq
        .iter()
        .enumerate()
        .map(|(i, &si)| {
            let mut sum = tau_sq / si;
            for (j, &sj) in sigma_sq.iter().enumerate() {
                if j != i {
                    sum += sj / (si - sj);
                }
            }
            1.0 + sum / nf
        })
        .collect())
}

/// Error terms ε_k* = ŵ_k* − Σ_{i≤m} w_i*·(û_kᵀuᵢ) of the prediction-score
/// decomposition, for every retained component k and every column of
/// `x_new`. True scores are taken as w_i* = uᵢᵀX* (zero-mean model); this
/// is a test oracle for the error-variance limits.
pub fn epsilon_decomposition(
    fit: &PcaFit,
    oracle: &OracleTruth,
    x_new: &DataMatrix,
) -> Result<Matrix> {
    let r = fit.rank();
    let preds = pca::predict_scores(fit, x_new, r)?;
    let m = oracle.directions.cols();
    // P[k][i] = û_kᵀ uᵢ.
    let p = fit.directions.tr_mul(&oracle.directions);
    // True scores of the new columns.
    let w_true = oracle.directions.tr_mul(x_new.as_matrix());
    let mut eps = Matrix::zeros(r, x_new.cols());
    for j in 0..x_new.cols() {
        for k in 0..r {
            let mut signal = 0.0;
            for i in 0..m {
                signal += w_true.get(i, j) * p.get(k, i);
            }
            eps.set(k, j, preds.get(k, j) - signal);
        }
    }
    Ok(eps)
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
