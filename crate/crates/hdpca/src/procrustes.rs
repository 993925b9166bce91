//! Best-fitting empirical counterparts of the scaling/rotation bias: align
//! estimated scores to known true scores with an orthogonal rotation and a
//! positive diagonal scale, by alternating minimization of
//! ‖W₁ − Ř·Š⁻¹·Ŵ₁‖_F. When the fit is exact this inverts the score bias
//! relation Ŵ₁ = Š·Řᵀ·W₁, so the fitted diagonal is the empirical
//! counterpart of the scaling factors ρ and Ř of the rotation.

use crate::error::{Error, Result};
use crate::numerics::{dot, sym_eig, Matrix};
use crate::pca::ScoreMatrix;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1000;

/// Inverse-scale floor; a negative optimal entry is handled by flipping the
/// matching rotation column instead, which preserves orthogonality and the
/// fitted product.
const SCALE_FLOOR: f64 = 1e-12;

/// Result of the alignment fit.
#[derive(Debug, Clone)]
pub struct ProcrustesFit {
    /// Diagonal of Š, all positive: the empirical scaling factors ρ̌.
    pub scale: Vec<f64>,
    /// Orthogonal Ř (determinant may be −1).
    pub rotation: Matrix,
    /// Final residual ‖W₁ − Ř·Š⁻¹·Ŵ₁‖_F.
    pub objective: f64,
    /// Number of full alternating iterations performed.
    pub iters: usize,
    /// Rotation angle cos⁻¹(Ř₁₁), reported for m = 2 only.
    pub theta: Option<f64>,
    /// Objective after every half-step, non-increasing.
    pub objective_trace: Vec<f64>,
}

/// Fit Š (positive diagonal) and Ř (orthogonal) by alternating two exact
/// closed-form updates: given the scales, the rotation is the orthogonal
/// polar factor of W₁·Ŵ₁ᵀ·Š⁻¹; given the rotation, each inverse-scale entry
/// is a row-wise least-squares coefficient, with a negative optimum folded
/// into a sign flip of the matching rotation column. Starts at Š = I and
/// stops when the relative objective change drops below `tol` or after
/// `max_iter` iterations. Both half-steps are exact coordinate minimizers,
/// so the recorded objective trace is non-increasing.
pub fn fit_scale_rotation(
    w1: &ScoreMatrix,
    w1_hat: &ScoreMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<ProcrustesFit> {
    let m = w1.comps();
    let n = w1.cols();
    if w1_hat.comps() != m || w1_hat.cols() != n {
        return Err(Error::InvalidInput(format!(
            "score shapes differ: {}x{} vs {}x{}",
            m,
            n,
            w1_hat.comps(),
            w1_hat.cols()
        )));
    }
    if m >= n {
        return Err(Error::InvalidInput(format!(
            "alignment needs m < n, got m = {m}, n = {n}"
        )));
    }
    let truth = w1.values();
    let target = w1_hat.values();

    // Rank check on the true scores.
    let cov = truth.matmul(&truth.transpose());
    let cov_eig = sym_eig(&cov, m)?;
    let lead = cov_eig.values[0].max(0.0);
    if cov_eig.values[m - 1] <= 1e-12 * lead.max(1e-300) {
        return Err(Error::DegenerateInput(
            "true score rows are linearly dependent".into(),
        ));
    }
    // Row norms of the estimated scores; a zero row cannot be aligned.
    let target_row_sq: Vec<f64> = (0..m)
        .map(|i| {
            let r = target.row(i);
            dot(&r, &r)
        })
        .collect();
    if target_row_sq.iter().any(|&v| v <= 0.0) {
        return Err(Error::DegenerateInput("estimated score row is zero".into()));
    }

    let cross = truth.matmul(&target.transpose());

    // inv_scale = diag(Š⁻¹); rotation = Ř.
    let mut inv_scale = vec![1.0f64; m];
    let mut rotation = Matrix::identity(m);
    let mut objective = residual(truth, &rotation, &inv_scale, target);
    let mut trace = vec![objective];
    let mut iters = 0usize;

    while iters < max_iter {
        iters += 1;

        // (a) rotation given the scales: exact orthogonal Procrustes,
        // Ř = polar factor of W₁·Ŵ₁ᵀ·Š⁻¹.
        let mut weighted = cross.clone();
        for (i, &di) in inv_scale.iter().enumerate() {
            weighted.scale_col(i, di);
        }
        rotation = polar_orthogonal(&weighted)?;
        objective = residual(truth, &rotation, &inv_scale, target);
        trace.push(objective);

        // (b) inverse scales given the rotation: with the residual rotated
        // back, ‖ŘᵀW₁ − Š⁻¹Ŵ₁‖ decouples into one least squares per row.
        let back = rotation.tr_mul(truth);
        for i in 0..m {
            let mut di = dot(&back.row(i), &target.row(i)) / target_row_sq[i];
            if di < 0.0 {
                rotation.scale_col(i, -1.0);
                di = -di;
            }
            inv_scale[i] = di.max(SCALE_FLOOR);
        }
        let prev = objective;
        objective = residual(truth, &rotation, &inv_scale, target);
        trace.push(objective);

        if prev - objective <= tol * prev.max(f64::MIN_POSITIVE) {
            break;
        }
    }

    let scale: Vec<f64> = inv_scale.iter().map(|d| 1.0 / d).collect();
    let theta = if m == 2 {
        Some(rotation.get(0, 0).clamp(-1.0, 1.0).acos())
    } else {
        None
    };
    Ok(ProcrustesFit { scale, rotation, objective, iters, theta, objective_trace: trace })
}

/// ‖W₁ − Ř·diag(inv_scale)·Ŵ₁‖_F, computed as ‖ŘᵀW₁ − diag(inv_scale)·Ŵ₁‖_F.
fn residual(truth: &Matrix, rotation: &Matrix, inv_scale: &[f64], target: &Matrix) -> f64 {
    let back = rotation.tr_mul(truth);
    let mut acc = 0.0;
    for c in 0..target.cols() {
        for r in 0..target.rows() {
            let e = back.get(r, c) - inv_scale[r] * target.get(r, c);
            acc += e * e;
        }
    }
    acc.sqrt()
}

/// Orthogonal polar factor U·Vᵀ of a small square matrix M = U·Σ·Vᵀ,
/// the maximizer of tr(RᵀM) over orthogonal R.
fn polar_orthogonal(m: &Matrix) -> Result<Matrix> {
    let k = m.rows();
    let gram = m.tr_mul(m);
    let eig = sym_eig(&gram, k)?;
    let sigma_max = eig.values[0].max(0.0).sqrt();
    // Left factor columns; near-null singular directions are completed to an
    // orthonormal basis from coordinate vectors (lowest index first).
    let mut u = Matrix::zeros(k, k);
    for i in 0..k {
        let sigma = eig.values[i].max(0.0).sqrt();
        let mut col = vec![0.0f64; k];
        if sigma > sigma_max * 1e-12 && sigma > 0.0 {
            for r in 0..k {
                let mut acc = 0.0;
                for c in 0..k {
                    acc += m.get(r, c) * eig.vectors.get(c, i);
                }
                col[r] = acc / sigma;
            }
        } else {
            'seed: for seed in 0..k {
                col.iter_mut().for_each(|v| *v = 0.0);
                col[seed] = 1.0;
                for j in 0..i {
                    let proj = dot(u.col(j), &col);
                    for (cv, uv) in col.iter_mut().zip(u.col(j)) {
                        *cv -= proj * uv;
                    }
                }
                let norm = dot(&col, &col).sqrt();
                if norm > 1e-6 {
                    col.iter_mut().for_each(|v| *v /= norm);
                    break 'seed;
                }
            }
        }
        // One re-orthogonalization pass keeps U orthonormal.
        for j in 0..i {
            let proj = dot(u.col(j), &col);
            for (cv, uv) in col.iter_mut().zip(u.col(j)) {
                *cv -= proj * uv;
            }
        }
        let norm = dot(&col, &col).sqrt();
        for (r, v) in col.iter().enumerate() {
            u.set(r, i, v / norm);
        }
    }
    Ok(u.matmul(&eig.vectors.transpose()))
}
