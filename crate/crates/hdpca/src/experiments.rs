//! Monte-Carlo harness: repetition loops for the bias-factor table, the
//! noise-component table, the correlation-limit figure, the score-pair
//! figure and the classification demo, with deterministic per-repetition
//! seeding and order-normalized aggregation.
//!
//! Every repetition is a pure function of (spec, repetition index): results
//! are bit-identical for any thread count, and rows are always sorted by
//! repetition index.

use rayon::prelude::*;

use crate::bias::{self, BiasFactors, JackknifeVariant};
use crate::error::{Error, Result};
use crate::numerics::{dot, mix_seed, sym_eig, Matrix};
use crate::pca::{self, ScoreKind, ScoreMatrix};
use crate::procrustes;
use crate::simulate::{self, Dataset, MixtureSpec, SpikeSpec};

/// Which data-generating model an experiment draws from.
#[derive(Debug, Clone)]
pub enum ModelSpec {
    Spike { sigma_sq: Vec<f64>, beta: f64 },
    Mixture { a: f64, probs: [f64; 3] },
}

impl ModelSpec {
    /// Centering default: the mixture model has a non-zero mean, so its
    /// experiments center by the sample column mean; the spike model is
    /// zero-mean and does not.
    pub fn default_center(&self) -> bool {
        matches!(self, ModelSpec::Mixture { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Spike { .. } => "spike",
            ModelSpec::Mixture { .. } => "mixture",
        }
    }
}

/// Scaling-factor estimators selectable in a bias table run. The oracle
/// factor (`Theory`) and the Procrustes best fit (`Best`) are always
/// computed; the others are opt-in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Estimator {
    Theory,
    Best,
    Asymptotic,
    Jackknife1,
    Jackknife2,
    Jackknife3,
    Lzw,
}

impl Estimator {
    pub const ALL: [Estimator; 7] = [
        Estimator::Theory,
        Estimator::Best,
        Estimator::Asymptotic,
        Estimator::Jackknife1,
        Estimator::Jackknife2,
        Estimator::Jackknife3,
        Estimator::Lzw,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Theory => "theory",
            Estimator::Best => "best",
            Estimator::Asymptotic => "asymptotic",
            Estimator::Jackknife1 => "jackknife1",
            Estimator::Jackknife2 => "jackknife2",
            Estimator::Jackknife3 => "jackknife3",
            Estimator::Lzw => "lzw",
        }
    }

    pub fn parse(s: &str) -> Option<Estimator> {
        Estimator::ALL.iter().copied().find(|e| e.name() == s)
    }
}

/// One Monte-Carlo experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub model: ModelSpec,
    pub d: usize,
    pub n: usize,
    pub n_test: usize,
    pub m: usize,
    pub reps: usize,
    pub master_seed: u64,
    /// None selects the model default.
    pub center: Option<bool>,
    pub estimators: Vec<Estimator>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidSpec("reps must be >= 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidSpec("estimator set must be non-empty".into()));
        }
        if let ModelSpec::Mixture { .. } = self.model {
            if self.m != 2 {
                return Err(Error::InvalidSpec("the mixture model has exactly 2 spikes".into()));
            }
        }
        Ok(())
    }

    pub fn center(&self) -> bool {
        self.center.unwrap_or_else(|| self.model.default_center())
    }

    /// Seed for one repetition.
    pub fn rep_seed(&self, rep: usize) -> u64 {
        mix_seed(self.master_seed, rep as u64)
    }

    /// Generate the dataset of one repetition.
    pub fn gen(&self, rep: usize) -> Result<Dataset> {
        let seed = self.rep_seed(rep);
        match &self.model {
            ModelSpec::Spike { sigma_sq, beta } => simulate::gen_spike(
                &SpikeSpec {
                    d: self.d,
                    n: self.n,
                    m: self.m,
                    sigma_sq: sigma_sq.clone(),
                    beta: *beta,
                    seed,
                    rotate_frame: false,
                },
                self.n_test,
            ),
            ModelSpec::Mixture { a, probs } => simulate::gen_mixture(
                &MixtureSpec { d: self.d, n: self.n, a: *a, probs: *probs, seed },
                self.n_test,
            ),
        }
    }
}

/// One repetition's record: either a full value row or a degenerate flag.
#[derive(Debug, Clone)]
pub struct RepRow {
    pub rep: usize,
    pub seed: u64,
    /// Column values; empty when the repetition was flagged.
    pub values: Vec<f64>,
    /// Degeneracy reason; flagged rows are excluded from aggregates.
    pub flag: Option<String>,
}

/// Per-repetition rows plus recomputable aggregates.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    /// Names of the value columns (rep and seed columns are implicit).
    pub columns: Vec<String>,
    /// Rows sorted by repetition index.
    pub rows: Vec<RepRow>,
}

impl ExperimentReport {
    pub fn excluded(&self) -> usize {
        self.rows.iter().filter(|r| r.flag.is_some()).count()
    }

    /// Mean per column over unflagged rows, fixed summation order.
    pub fn mean(&self) -> Vec<f64> {
        let mut acc = vec![0.0f64; self.columns.len()];
        let mut count = 0usize;
        for row in self.rows.iter().filter(|r| r.flag.is_none()) {
            for (a, v) in acc.iter_mut().zip(&row.values) {
                *a += v;
            }
            count += 1;
        }
        acc.iter().map(|a| a / count as f64).collect()
    }

    /// Sample standard deviation per column over unflagged rows.
    pub fn sd(&self) -> Vec<f64> {
        let mean = self.mean();
        let mut acc = vec![0.0f64; self.columns.len()];
        let mut count = 0usize;
        for row in self.rows.iter().filter(|r| r.flag.is_none()) {
            for ((a, v), m) in acc.iter_mut().zip(&row.values).zip(&mean) {
                let e = v - m;
                *a += e * e;
            }
            count += 1;
        }
        if count < 2 {
            return vec![0.0; self.columns.len()];
        }
        acc.iter().map(|a| (a / (count - 1) as f64).sqrt()).collect()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .filter(|r| r.flag.is_none())
                .map(|r| r.values[idx])
                .collect(),
        )
    }

    pub fn mean_of(&self, name: &str) -> Option<f64> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.mean()[idx])
    }
}

/// Run repetitions in parallel, keeping deterministic output order.
/// Degenerate repetitions become flagged rows; any other error aborts.
fn run_reps<F>(spec: &ExperimentSpec, per_rep: F) -> Result<ExperimentReport>
where
    F: Fn(usize, &Dataset) -> Result<Vec<f64>> + Sync,
{
    let mut rows: Vec<RepRow> = (0..spec.reps)
        .into_par_iter()
        .map(|rep| -> Result<RepRow> {
            let seed = spec.rep_seed(rep);
            let outcome = spec.gen(rep).and_then(|ds| per_rep(rep, &ds));
            match outcome {
                Ok(values) => Ok(RepRow { rep, seed, values, flag: None }),
                Err(e) if is_degenerate(&e) => {
                    Ok(RepRow { rep, seed, values: Vec::new(), flag: Some(e.to_string()) })
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| r.rep);
    Ok(ExperimentReport { columns: Vec::new(), rows })
}

fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::DegenerateSignal { .. }
            | Error::DegenerateScore { .. }
            | Error::DegenerateSpike
            | Error::DegenerateInput(_)
    )
}

/// Ordered, deduplicated estimator list with the always-on entries first.
fn estimator_columns(requested: &[Estimator]) -> Vec<Estimator> {
    let mut list = vec![Estimator::Theory, Estimator::Best];
    for e in Estimator::ALL {
        if requested.contains(&e) && !list.contains(&e) {
            list.push(e);
        }
    }
    list
}

/// Scaling-factor table: per repetition, every requested estimate of ρ per
/// component, plus the oracle factor and the Procrustes best fit (always),
/// and the two rotation angles when m = 2.
pub fn run_bias_table(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let estimators = estimator_columns(&spec.estimators);
    let m = spec.m;
    let mut columns = Vec::new();
    for e in &estimators {
        for i in 1..=m {
            columns.push(format!("{}_rho_{}", e.name(), i));
        }
    }
    if m == 2 {
        columns.push("theta_theory".into());
        columns.push("theta_best".into());
    }

    let center = spec.center();
    let d = spec.d;
    let mut report = run_reps(spec, |_rep, ds| {
        let fit = pca::fit(&ds.train, center)?;
        let w1 = ds.oracle.scaled_score_matrix();
        let cov = bias::score_cov(&w1)?;
        let theory = bias::rho_theory(&cov, ds.oracle.tau_sq)?;

        // Sample scores on the scaled, sign-aligned footing of the bias
        // relation, shared by the Procrustes fit and the angle report.
        let target = bias::biased_sample_target(&theory, w1.values())?;
        let mut scaled = pca::sample_scores(&fit, m)?.scaled(1.0 / (d as f64).sqrt());
        let signs = bias::row_signs_to_target(scaled.values(), &target);
        let mut aligned = scaled.values().clone();
        for (i, &s) in signs.iter().enumerate() {
            aligned.scale_row(i, s);
        }
        scaled = ScoreMatrix::new(aligned, ScoreKind::Sample);
        let best = procrustes::fit_scale_rotation(
            &w1,
            &scaled,
            procrustes::DEFAULT_TOL,
            procrustes::DEFAULT_MAX_ITER,
        )?;

        let mut values = Vec::with_capacity(spec_len(&estimators, m));
        for e in &estimators {
            let rho: Vec<f64> = match e {
                Estimator::Theory => theory.rho.clone(),
                Estimator::Best => best.scale.clone(),
                Estimator::Asymptotic => bias::rho_asymptotic(&fit, m, d)?.rho,
                Estimator::Jackknife1 => {
                    bias::rho_jackknife_gram(&fit, &ds.train, m, JackknifeVariant::V1)?.rho
                }
                Estimator::Jackknife2 => {
                    bias::rho_jackknife_gram(&fit, &ds.train, m, JackknifeVariant::V2)?.rho
                }
                Estimator::Jackknife3 => {
                    bias::rho_jackknife_gram(&fit, &ds.train, m, JackknifeVariant::V3)?.rho
                }
                Estimator::Lzw => bias::rho_lzw(&fit, m, d)?.rho,
            };
            values.extend(rho);
        }
        if m == 2 {
            let r = theory.rotation.as_ref().expect("theory factors carry a rotation");
            values.push(r.get(0, 0).clamp(-1.0, 1.0).acos());
            values.push(best.theta.expect("m = 2 fit reports theta"));
        }
        Ok(values)
    })?;
    report.columns = columns;
    Ok(report)
}

fn spec_len(estimators: &[Estimator], m: usize) -> usize {
    estimators.len() * m + if m == 2 { 2 } else { 0 }
}

/// Noise-component table (k > m): variance of the kth sample and prediction
/// scores and their correlations with the true kth scores, plus the
/// population eigenvalue λ_k for reference.
pub fn run_noise_component_table(spec: &ExperimentSpec, k: usize) -> Result<ExperimentReport> {
    spec.validate()?;
    if k <= spec.m {
        return Err(Error::InvalidSpec(format!(
            "noise-component table needs k > m, got k = {k}, m = {}",
            spec.m
        )));
    }
    if !matches!(spec.model, ModelSpec::Spike { .. }) {
        return Err(Error::InvalidSpec(
            "noise-component table reads true noise scores off the spike model's coordinate frame"
                .into(),
        ));
    }
    let center = spec.center();
    let mut report = run_reps(spec, |_rep, ds| {
        let fit = pca::fit(&ds.train, center)?;
        let sample = pca::sample_scores(&fit, k)?;
        let pred = pca::predict_scores(&fit, &ds.test, k)?;
        let s_k = sample.row(k - 1);
        let p_k = pred.row(k - 1);
        // True kth scores are the kth coordinates (identity frame).
        let w_train: Vec<f64> =
            (0..ds.train.cols()).map(|j| ds.train.as_matrix().get(k - 1, j)).collect();
        let w_test: Vec<f64> =
            (0..ds.test.cols()).map(|j| ds.test.as_matrix().get(k - 1, j)).collect();
        Ok(vec![
            sample_variance(&s_k),
            sample_variance(&p_k),
            uncentered_corr(&s_k, &w_train),
            pearson_corr(&p_k, &w_test),
            ds.population_eigs[k - 1],
        ])
    })?;
    report.columns = vec![
        format!("sample_var_{k}"),
        format!("pred_var_{k}"),
        format!("sample_corr_{k}"),
        format!("pred_corr_{k}"),
        format!("population_lambda_{k}"),
    ];
    Ok(report)
}

/// Correlation figure data: empirical correlations of sample and prediction
/// scores with the true scores, paired with their theoretical limits.
pub fn run_correlation_figure(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let m = spec.m;
    let center = spec.center();
    let d = spec.d;
    let mut report = run_reps(spec, |_rep, ds| {
        let fit = pca::fit(&ds.train, center)?;
        let w1 = ds.oracle.scaled_score_matrix();
        let cov = bias::score_cov(&w1)?;
        let theory = bias::rho_theory(&cov, ds.oracle.tau_sq)?;
        let limits = bias::theory_limits(&ds.oracle, &cov, &ds.population_eigs);

        let target = bias::biased_sample_target(&theory, w1.values())?;
        let sample = pca::sample_scores(&fit, m)?.scaled(1.0 / (d as f64).sqrt());
        let signs = bias::row_signs_to_target(sample.values(), &target);
        let pred = pca::predict_scores(&fit, &ds.test, m)?;

        let mut values = Vec::with_capacity(4 * m);
        for k in 0..m {
            let s_row: Vec<f64> = sample.row(k).iter().map(|v| v * signs[k]).collect();
            let p_row: Vec<f64> = pred.row(k).iter().map(|v| v * signs[k]).collect();
            let w_row = ds.oracle.true_scores.row(k);
            let w_test = ds.oracle_test.true_scores.row(k);
            values.push(uncentered_corr(&s_row, &w_row));
            values.push(limits.sample_corr_limits.get(k, k));
            values.push(pearson_corr(&p_row, &w_test));
            values.push(limits.prediction_corr_limits.get(k, k));
        }
        Ok(values)
    })?;
    let mut columns = Vec::new();
    for k in 1..=m {
        columns.push(format!("sample_corr_{k}"));
        columns.push(format!("sample_limit_{k}"));
        columns.push(format!("pred_corr_{k}"));
        columns.push(format!("pred_limit_{k}"));
    }
    report.columns = columns;
    Ok(report)
}

/// One row per plotted observation in a score-pair figure.
#[derive(Debug, Clone)]
pub struct ScorePairRow {
    /// "sample" for training columns, "prediction" for test columns.
    pub set: &'static str,
    pub index: usize,
    pub true_scores: [f64; 2],
    pub scores: [f64; 2],
    pub adjusted: [f64; 2],
}

/// Score pairs of one realization (m = 2): true scores, raw sample or
/// prediction scores, and their bias-adjusted versions.
#[derive(Debug, Clone)]
pub struct ScorePairsTable {
    pub rows: Vec<ScorePairRow>,
    /// Plug-in factors used for the adjustment.
    pub factors: BiasFactors,
    /// Oracle factors of the same realization, for reference.
    pub theory: BiasFactors,
    pub seed: u64,
}

/// Generate one realization and lay out true/estimated/adjusted score pairs
/// in long format (m = 2 only).
pub fn run_score_pairs(spec: &ExperimentSpec) -> Result<ScorePairsTable> {
    spec.validate()?;
    if spec.m != 2 {
        return Err(Error::InvalidSpec("score pairs are a 2-component display".into()));
    }
    let ds = spec.gen(0)?;
    let center = spec.center();
    let fit = pca::fit(&ds.train, center)?;
    let w1 = ds.oracle.scaled_score_matrix();
    let cov = bias::score_cov(&w1)?;
    let theory = bias::rho_theory(&cov, ds.oracle.tau_sq)?;
    let factors = bias::rho_asymptotic(&fit, 2, spec.d)?;

    // Sign-align estimated rows to the bias relation so the pairs plot on
    // the same sheet as the true scores.
    let target = bias::biased_sample_target(&theory, w1.values())?;
    let scaled = pca::sample_scores(&fit, 2)?.scaled(1.0 / (spec.d as f64).sqrt());
    let signs = bias::row_signs_to_target(scaled.values(), &target);

    let apply_signs = |scores: &ScoreMatrix| -> ScoreMatrix {
        let mut v = scores.values().clone();
        for (i, &s) in signs.iter().enumerate() {
            v.scale_row(i, s);
        }
        ScoreMatrix::new(v, scores.kind())
    };

    let sample = apply_signs(&pca::sample_scores(&fit, 2)?);
    let pred = apply_signs(&pca::predict_scores(&fit, &ds.test, 2)?);
    let sample_adj = bias::adjust(&sample, &factors)?;
    let pred_adj = bias::adjust(&pred, &factors)?;

    let mut rows = Vec::with_capacity(spec.n + spec.n_test);
    for j in 0..spec.n {
        rows.push(ScorePairRow {
            set: "sample",
            index: j,
            true_scores: [ds.oracle.true_scores.get(0, j), ds.oracle.true_scores.get(1, j)],
            scores: [sample.get(0, j), sample.get(1, j)],
            adjusted: [sample_adj.get(0, j), sample_adj.get(1, j)],
        });
    }
    for j in 0..spec.n_test {
        rows.push(ScorePairRow {
            set: "prediction",
            index: j,
            true_scores: [
                ds.oracle_test.true_scores.get(0, j),
                ds.oracle_test.true_scores.get(1, j),
            ],
            scores: [pred.get(0, j), pred.get(1, j)],
            adjusted: [pred_adj.get(0, j), pred_adj.get(1, j)],
        });
    }
    Ok(ScorePairsTable { rows, factors, theory, seed: spec.rep_seed(0) })
}

/// One-vs-rest ridge classifier on standardized component scores.
/// Closed-form and deterministic: ridge 1e-3, ±1 indicator targets,
/// prediction by argmax with ties to the lowest class index.
#[derive(Debug, Clone)]
pub struct LinearClassifier {
    /// (m+1) × G weights, bias row first.
    pub weights: Matrix,
    pub classes: Vec<usize>,
    means: Vec<f64>,
    sds: Vec<f64>,
}

const RIDGE: f64 = 1e-3;

/// Train the classifier on m × n scores with one label per column.
pub fn train_classifier(scores: &ScoreMatrix, labels: &[usize]) -> Result<LinearClassifier> {
    let m = scores.comps();
    let n = scores.cols();
    if labels.len() != n {
        return Err(Error::InvalidInput(format!(
            "got {} labels for {n} observations",
            labels.len()
        )));
    }
    let mut classes: Vec<usize> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::InvalidInput("need at least 2 classes".into()));
    }
    for &c in &classes {
        if labels.iter().filter(|&&l| l == c).count() < 2 {
            return Err(Error::InvalidInput(format!("class {c} has fewer than 2 samples")));
        }
    }

    // Standardization from the training scores only.
    let mut means = vec![0.0f64; m];
    let mut sds = vec![0.0f64; m];
    for i in 0..m {
        let row = scores.row(i);
        let mean = row.iter().sum::<f64>() / n as f64;
        let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        means[i] = mean;
        sds[i] = if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 };
    }

    // Design with bias column, normal equations with ridge.
    let g = classes.len();
    let p = m + 1;
    let mut ztz = Matrix::zeros(p, p);
    let mut zty = Matrix::zeros(p, g);
    for j in 0..n {
        let mut z = vec![0.0f64; p];
        z[0] = 1.0;
        for i in 0..m {
            z[i + 1] = (scores.get(i, j) - means[i]) / sds[i];
        }
        for a in 0..p {
            for b in 0..p {
                ztz.set(a, b, ztz.get(a, b) + z[a] * z[b]);
            }
            for (gi, &c) in classes.iter().enumerate() {
                let y = if labels[j] == c { 1.0 } else { -1.0 };
                zty.set(a, gi, zty.get(a, gi) + z[a] * y);
            }
        }
    }
    for a in 0..p {
        ztz.set(a, a, ztz.get(a, a) + RIDGE);
    }
    // Solve via the eigendecomposition of the (strictly positive definite)
    // normal matrix.
    let eig = sym_eig(&ztz, p)?;
    let mut weights = Matrix::zeros(p, g);
    for gi in 0..g {
        let rhs: Vec<f64> = (0..p).map(|a| zty.get(a, gi)).collect();
        let mut sol = vec![0.0f64; p];
        for e in 0..p {
            let coef = dot(eig.vectors.col(e), &rhs) / eig.values[e];
            for (s, &v) in sol.iter_mut().zip(eig.vectors.col(e)) {
                *s += coef * v;
            }
        }
        for a in 0..p {
            weights.set(a, gi, sol[a]);
        }
    }
    Ok(LinearClassifier { weights, classes, means, sds })
}

impl LinearClassifier {
    /// Predicted class label per column.
    pub fn predict(&self, scores: &ScoreMatrix) -> Vec<usize> {
        let m = self.means.len();
        (0..scores.cols())
            .map(|j| {
                let mut best = 0usize;
                let mut best_val = f64::NEG_INFINITY;
                for gi in 0..self.classes.len() {
                    let mut v = self.weights.get(0, gi);
                    for i in 0..m {
                        let z = (scores.get(i, j) - self.means[i]) / self.sds[i];
                        v += self.weights.get(i + 1, gi) * z;
                    }
                    if v > best_val {
                        best_val = v;
                        best = gi;
                    }
                }
                self.classes[best]
            })
            .collect()
    }

    /// Misclassification rate in percent.
    pub fn error_percent(&self, scores: &ScoreMatrix, labels: &[usize]) -> f64 {
        let preds = self.predict(scores);
        let wrong = preds.iter().zip(labels).filter(|(p, l)| p != l).count();
        100.0 * wrong as f64 / labels.len() as f64
    }
}

/// Classification demo: train on sample scores, test on prediction scores,
/// with and without bias adjustment by the plug-in factors.
pub fn run_classification_demo(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    if !matches!(spec.model, ModelSpec::Mixture { .. }) {
        return Err(Error::InvalidSpec("classification demo uses the mixture model".into()));
    }
    let center = spec.center();
    let d = spec.d;
    let m = spec.m;
    let mut report = run_reps(spec, |_rep, ds| {
        let labels = ds.oracle.labels.as_ref().expect("mixture datasets carry labels");
        let test_labels =
            ds.oracle_test.labels.as_ref().expect("mixture datasets carry labels");
        let fit = pca::fit(&ds.train, center)?;
        let sample = pca::sample_scores(&fit, m)?;
        let pred = pca::predict_scores(&fit, &ds.test, m)?;

        let unadj = train_classifier(&sample, labels)?;
        let train_err_unadj = unadj.error_percent(&sample, labels);
        let test_err_unadj = unadj.error_percent(&pred, test_labels);

        let factors = bias::rho_asymptotic(&fit, m, d)?;
        let sample_adj = bias::adjust(&sample, &factors)?;
        let pred_adj = bias::adjust(&pred, &factors)?;
        let adj = train_classifier(&sample_adj, labels)?;
        let train_err_adj = adj.error_percent(&sample_adj, labels);
        let test_err_adj = adj.error_percent(&pred_adj, test_labels);

        Ok(vec![train_err_unadj, test_err_unadj, train_err_adj, test_err_adj])
    })?;
    report.columns = vec![
        "train_err_unadj".into(),
        "test_err_unadj".into(),
        "train_err_adj".into(),
        "test_err_adj".into(),
    ];
    Ok(report)
}

/// Sample variance (n − 1 denominator).
pub fn sample_variance(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
}

/// Inner-product correlation, the zero-mean form r(x, y) = xᵀy/√(xᵀx·yᵀy).
pub fn uncentered_corr(a: &[f64], b: &[f64]) -> f64 {
    let num = dot(a, b);
    let den = (dot(a, a) * dot(b, b)).sqrt();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Ordinary Pearson correlation.
pub fn pearson_corr(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for (x, y) in a.iter().zip(b) {
        num += (x - ma) * (y - mb);
        da += (x - ma) * (x - ma);
        db += (y - mb) * (y - mb);
    }
    let den = (da * db).sqrt();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}
