//! Command-line front end.
//!
//! Three subcommands: `simulate` writes a dataset with its oracle sidecars,
//! `scores` runs the score/adjustment pipeline on user CSV data, and
//! `reproduce` regenerates the reference tables and figures. Every command
//! is deterministic given its flags and seed.
//!
//! Exit codes: 0 ok, 1 internal error, 2 ok with degenerate repetitions
//! excluded, 64 usage error, 65 data error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::bias::{self, JackknifeVariant};
use crate::error::{Error, Result};
use crate::experiments::{self, Estimator, ExperimentSpec, ModelSpec};
use crate::numerics::RNG_ALGORITHM;
use crate::pca;
use crate::report::{self, FloatFormat};
use crate::simulate::{self, MixtureSpec, SpikeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_EXCLUDED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "hdpca",
    version,
    about = "PC score bias diagnostics and adjustment for tall data (d >> n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a dataset from the spike or mixture model with oracle truth.
    Simulate(SimulateArgs),
    /// Fit PCA on a data CSV, estimate bias factors, write adjusted scores.
    Scores(ScoresArgs),
    /// Reproduce a reference table or figure.
    Reproduce(ReproduceArgs),
}

/// Flags shared by every subcommand. Values read from `--config` fill in
/// anything not set on the command line.
#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Flat `key = value` configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dimension (number of variables).
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Sample size (number of observations).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Number of leading components.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Spike-model noise decay exponent.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Mixture-model mean entry magnitude.
    #[arg(long, global = true)]
    a: Option<f64>,
    /// Mixture group probabilities, e.g. 0.5,0.3,0.2.
    #[arg(long, global = true)]
    probs: Option<String>,
    /// Spike scales, e.g. 0.02,0.01.
    #[arg(long, global = true)]
    sigma_sq: Option<String>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo repetitions.
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Number of test observations.
    #[arg(long, global = true)]
    n_test: Option<usize>,
    /// Center columns by the sample mean before PCA.
    #[arg(long, global = true)]
    center: Option<bool>,
    /// Comma-separated estimator list (theory,best,asymptotic,jackknife1..3,lzw).
    #[arg(long, global = true)]
    estimators: Option<String>,
    /// Output file or directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap the worker thread count (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print floats with 17 significant digits (round-trip exact).
    #[arg(long, global = true, default_value_t = false)]
    full_precision: bool,
    /// Print the resolved configuration and RNG identifier first.
    #[arg(long, global = true, default_value_t = false)]
    manifest: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Data-generating model.
    #[arg(long, default_value = "spike", value_parser = ["spike", "mixture"])]
    model: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct ScoresArgs {
    /// Training data CSV (d rows, one observation per column).
    #[arg(long)]
    train: PathBuf,
    /// Optional test data CSV with the same number of rows.
    #[arg(long)]
    test: Option<PathBuf>,
    /// Scaling estimator to adjust with.
    #[arg(
        long,
        default_value = "asymptotic",
        value_parser = ["asymptotic", "jackknife1", "jackknife2", "jackknife3", "lzw"]
    )]
    estimator: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// Target: table1, table2, table3, fig1, fig3 or fig4.
    #[arg(value_parser = ["table1", "table2", "table3", "fig1", "fig3", "fig4"])]
    target: String,
    #[command(flatten)]
    common: CommonArgs,
}

/// Entry point: parse, dispatch, map errors to exit codes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => EXIT_INTERNAL,
                _ => EXIT_DATA,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let common = match &cli.command {
        Command::Simulate(a) => a.common.clone(),
        Command::Scores(a) => a.common.clone(),
        Command::Reproduce(a) => a.common.clone(),
    };
    let common = apply_config(common)?;
    let threads = common.threads;
    let body = move || match cli.command {
        Command::Simulate(args) => cmd_simulate(&args.model, &common),
        Command::Scores(args) => cmd_scores(&args.train, args.test.as_deref(), &args.estimator, &common),
        Command::Reproduce(args) => cmd_reproduce(&args.target, &common),
    };
    match threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(body),
        _ => body(),
    }
}

/// Merge `key = value` config-file entries under the command-line flags.
fn apply_config(mut common: CommonArgs) -> Result<CommonArgs> {
    let Some(path) = common.config.clone() else {
        return Ok(common);
    };
    let text = fs::read_to_string(&path)?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(Error::ParseError {
                line: idx + 1,
                detail: "expected `key = value`".into(),
            });
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    let parse_err = |key: &str, value: &str| Error::InvalidSpec(format!(
        "config key {key} has invalid value {value:?}"
    ));
    for (key, value) in map {
        match key.as_str() {
            "d" if common.d.is_none() => {
                common.d = Some(value.parse().map_err(|_| parse_err("d", &value))?)
            }
            "n" if common.n.is_none() => {
                common.n = Some(value.parse().map_err(|_| parse_err("n", &value))?)
            }
            "m" if common.m.is_none() => {
                common.m = Some(value.parse().map_err(|_| parse_err("m", &value))?)
            }
            "beta" if common.beta.is_none() => {
                common.beta = Some(value.parse().map_err(|_| parse_err("beta", &value))?)
            }
            "a" if common.a.is_none() => {
                common.a = Some(value.parse().map_err(|_| parse_err("a", &value))?)
            }
            "probs" if common.probs.is_none() => common.probs = Some(value),
            "sigma_sq" if common.sigma_sq.is_none() => common.sigma_sq = Some(value),
            "seed" if common.seed.is_none() => {
                common.seed = Some(value.parse().map_err(|_| parse_err("seed", &value))?)
            }
            "reps" if common.reps.is_none() => {
                common.reps = Some(value.parse().map_err(|_| parse_err("reps", &value))?)
            }
            "n_test" if common.n_test.is_none() => {
                common.n_test = Some(value.parse().map_err(|_| parse_err("n_test", &value))?)
            }
            "center" if common.center.is_none() => {
                common.center = Some(value.parse().map_err(|_| parse_err("center", &value))?)
            }
            "estimators" if common.estimators.is_none() => common.estimators = Some(value),
            "out" if common.out.is_none() => common.out = Some(PathBuf::from(value)),
            "threads" if common.threads.is_none() => {
                common.threads = Some(value.parse().map_err(|_| parse_err("threads", &value))?)
            }
            "full_precision" if !common.full_precision => {
                common.full_precision =
                    value.parse().map_err(|_| parse_err("full_precision", &value))?
            }
            _ => {}
        }
    }
    Ok(common)
}

fn parse_list(text: &str, key: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSpec(format!("cannot parse {key} entry {v:?}")))
        })
        .collect()
}

fn parse_estimators(text: &str) -> Result<Vec<Estimator>> {
    text.split(',')
        .map(|v| {
            Estimator::parse(v.trim())
                .ok_or_else(|| Error::InvalidSpec(format!("unknown estimator {v:?}")))
        })
        .collect()
}

fn float_format(common: &CommonArgs) -> FloatFormat {
    FloatFormat::new(common.full_precision)
}

/// Resolve `--out` to a target file path: a directory (or missing flag)
/// takes the default name, an explicit file path wins.
fn out_file(common: &CommonArgs, default_name: &str) -> PathBuf {
    match &common.out {
        None => PathBuf::from(default_name),
        Some(p) if p.is_dir() => p.join(default_name),
        Some(p) => p.clone(),
    }
}

fn out_dir(common: &CommonArgs) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn print_manifest(command: &str, entries: &[(String, String)]) {
    println!("# manifest command={command}");
    for (k, v) in entries {
        println!("# manifest {k}={v}");
    }
    println!("# manifest rng={RNG_ALGORITHM}");
}

fn manifest_entries(common: &CommonArgs) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut push = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            out.push((k.to_string(), v));
        }
    };
    push("d", common.d.map(|v| v.to_string()));
    push("n", common.n.map(|v| v.to_string()));
    push("m", common.m.map(|v| v.to_string()));
    push("beta", common.beta.map(|v| v.to_string()));
    push("a", common.a.map(|v| v.to_string()));
    push("probs", common.probs.clone());
    push("sigma_sq", common.sigma_sq.clone());
    push("seed", common.seed.map(|v| v.to_string()));
    push("reps", common.reps.map(|v| v.to_string()));
    push("n_test", common.n_test.map(|v| v.to_string()));
    push("center", common.center.map(|v| v.to_string()));
    push("estimators", common.estimators.clone());
    push("out", common.out.as_ref().map(|v| v.display().to_string()));
    push("threads", common.threads.map(|v| v.to_string()));
    push("full_precision", Some(common.full_precision.to_string()));
    out
}

fn cmd_simulate(model: &str, common: &CommonArgs) -> Result<i32> {
    if common.manifest {
        print_manifest("simulate", &manifest_entries(common));
    }
    let fmt = FloatFormat::new(true); // datasets are always exported round-trip exact
    let seed = common.seed.unwrap_or(1);
    let n_test = common.n_test.unwrap_or(20);
    let ds = match model {
        "spike" => {
            let m = common.m.unwrap_or(2);
            let sigma_sq = match &common.sigma_sq {
                Some(t) => parse_list(t, "sigma_sq")?,
                None => default_sigma(m),
            };
            simulate::gen_spike(
                &SpikeSpec {
                    d: common.d.unwrap_or(10_000),
                    n: common.n.unwrap_or(50),
                    m,
                    sigma_sq,
                    beta: common.beta.unwrap_or(0.3),
                    seed,
                    rotate_frame: false,
                },
                n_test,
            )?
        }
        "mixture" => {
            let probs = match &common.probs {
                Some(t) => {
                    let v = parse_list(t, "probs")?;
                    if v.len() != 3 {
                        return Err(Error::InvalidSpec("probs needs exactly 3 entries".into()));
                    }
                    [v[0], v[1], v[2]]
                }
                None => [0.5, 0.3, 0.2],
            };
            simulate::gen_mixture(
                &MixtureSpec {
                    d: common.d.unwrap_or(10_000),
                    n: common.n.unwrap_or(100),
                    a: common.a.unwrap_or(0.15),
                    probs,
                    seed,
                },
                n_test,
            )?
        }
        other => return Err(Error::InvalidSpec(format!("unknown model {other:?}"))),
    };
    let dir = out_dir(common);
    fs::create_dir_all(&dir)?;
    write_to(&dir.join("train.csv"), |w| report::write_matrix_csv(w, ds.train.as_matrix(), fmt))?;
    write_to(&dir.join("test.csv"), |w| report::write_matrix_csv(w, ds.test.as_matrix(), fmt))?;
    for (name, contents) in report::oracle_files(&ds, fmt) {
        fs::write(dir.join(name), contents)?;
    }
    println!(
        "simulated {model}: d={} n={} n_test={} seed={seed} -> {}",
        ds.train.rows(),
        ds.train.cols(),
        ds.test.cols(),
        dir.display()
    );
    Ok(EXIT_OK)
}

fn default_sigma(m: usize) -> Vec<f64> {
    // 0.02, 0.01, 0.005, ... halving per component.
    (0..m).map(|i| 0.02 / (1 << i) as f64).collect()
}

fn cmd_scores(
    train: &Path,
    test: Option<&Path>,
    estimator: &str,
    common: &CommonArgs,
) -> Result<i32> {
    if common.manifest {
        print_manifest("scores", &manifest_entries(common));
    }
    let fmt = float_format(common);
    let x = report::read_matrix_csv(BufReader::new(fs::File::open(train)?))?;
    let d = x.rows();
    let n = x.cols();
    let m = common.m.unwrap_or(2);
    if d <= n {
        eprintln!(
            "warning: d = {d} <= n = {n}; the tall-data assumptions behind the bias \
             adjustment do not hold, continuing anyway"
        );
    }
    if m >= n {
        return Err(Error::InvalidSpec(format!(
            "m = {m} must be below n = {n}: the noise-level estimate averages the n - m \
             trailing eigenvalues, so at least one must exist"
        )));
    }
    let center = common.center.unwrap_or(false);
    let fit = pca::fit(&x, center)?;
    let sample = pca::sample_scores(&fit, m)?;
    let factors = match estimator {
        "asymptotic" => bias::rho_asymptotic(&fit, m, d)?,
        "jackknife1" => bias::rho_jackknife_gram(&fit, &x, m, JackknifeVariant::V1)?,
        "jackknife2" => bias::rho_jackknife_gram(&fit, &x, m, JackknifeVariant::V2)?,
        "jackknife3" => bias::rho_jackknife_gram(&fit, &x, m, JackknifeVariant::V3)?,
        "lzw" => bias::rho_lzw(&fit, m, d)?,
        other => return Err(Error::InvalidSpec(format!("unknown estimator {other:?}"))),
    };
    let adjusted = bias::adjust(&sample, &factors)?;

    let dir = out_dir(common);
    fs::create_dir_all(&dir)?;
    let meta = format!("d={d} n={n} center={center} estimator={estimator} rng={RNG_ALGORITHM}");
    write_to(&dir.join("sample_scores.csv"), |w| report::write_scores_csv(w, &sample, fmt, &meta))?;
    write_to(&dir.join("sample_scores_adjusted.csv"), |w| {
        report::write_scores_csv(w, &adjusted, fmt, &meta)
    })?;
    write_to(&dir.join("bias_factors.csv"), |w| report::write_bias_factors_csv(w, &factors, fmt))?;
    if let Some(rotation) = &factors.rotation {
        write_to(&dir.join("bias_rotation.csv"), |w| report::write_rotation_csv(w, rotation, fmt))?;
    }
    if let Some(test_path) = test {
        let x_new = report::read_matrix_csv(BufReader::new(fs::File::open(test_path)?))?;
        let pred = pca::predict_scores(&fit, &x_new, m)?;
        let pred_adj = bias::adjust(&pred, &factors)?;
        write_to(&dir.join("prediction_scores.csv"), |w| {
            report::write_scores_csv(w, &pred, fmt, &meta)
        })?;
        write_to(&dir.join("prediction_scores_adjusted.csv"), |w| {
            report::write_scores_csv(w, &pred_adj, fmt, &meta)
        })?;
    }
    let rho_text: Vec<String> = factors.rho.iter().map(|r| format!("{r:.4}")).collect();
    println!("estimated rho ({estimator}): {}", rho_text.join(", "));
    Ok(EXIT_OK)
}

/// Reference configurations behind `reproduce`.
fn reference_spike(d: usize, n: usize, beta: f64, seed: u64, reps: usize, n_test: usize) -> ExperimentSpec {
    ExperimentSpec {
        model: ModelSpec::Spike { sigma_sq: vec![0.02, 0.01], beta },
        d,
        n,
        n_test,
        m: 2,
        reps,
        master_seed: seed,
        center: None,
        estimators: vec![
            Estimator::Theory,
            Estimator::Best,
            Estimator::Asymptotic,
            Estimator::Jackknife1,
            Estimator::Lzw,
        ],
    }
}

fn reference_mixture(d: usize, n: usize, seed: u64, reps: usize, n_test: usize) -> ExperimentSpec {
    ExperimentSpec {
        model: ModelSpec::Mixture { a: 0.15, probs: [0.5, 0.3, 0.2] },
        d,
        n,
        n_test,
        m: 2,
        reps,
        master_seed: seed,
        center: None,
        estimators: vec![
            Estimator::Theory,
            Estimator::Best,
            Estimator::Asymptotic,
            Estimator::Jackknife1,
            Estimator::Lzw,
        ],
    }
}

fn cmd_reproduce(target: &str, common: &CommonArgs) -> Result<i32> {
    if common.manifest {
        print_manifest("reproduce", &manifest_entries(common));
    }
    let fmt = float_format(common);
    let seed = common.seed.unwrap_or(1);
    let reps = common.reps.unwrap_or(100);
    match target {
        "table1" => reproduce_table1(common, fmt, seed, reps),
        "table2" => reproduce_table2(common, fmt, seed, reps),
        "table3" => reproduce_table3(common, fmt, seed, reps),
        "fig1" | "fig3" => reproduce_score_pairs(target, common, fmt, seed),
        "fig4" => reproduce_fig4(common, fmt, seed, reps),
        other => Err(Error::InvalidSpec(format!("unknown target {other:?}"))),
    }
}

fn metadata_for(spec: &ExperimentSpec, extra: &str) -> Vec<String> {
    let model = match &spec.model {
        ModelSpec::Spike { sigma_sq, beta } => {
            format!("model=spike sigma_sq={sigma_sq:?} beta={beta}")
        }
        ModelSpec::Mixture { a, probs } => format!("model=mixture a={a} probs={probs:?}"),
    };
    vec![
        format!("{model} d={} n={} n_test={} m={}", spec.d, spec.n, spec.n_test, spec.m),
        format!(
            "reps={} master_seed={} center={} rng={RNG_ALGORITHM}{}",
            spec.reps,
            spec.master_seed,
            spec.center(),
            if extra.is_empty() { String::new() } else { format!(" {extra}") }
        ),
    ]
}

fn summarize(report: &experiments::ExperimentReport, label: &str) {
    let mean = report.mean();
    let sd = report.sd();
    println!("{label}: {} repetitions, {} excluded", report.rows.len(), report.excluded());
    for (i, col) in report.columns.iter().enumerate() {
        println!("  {col}: mean = {:.4}, sd = {:.4}", mean[i], sd[i]);
    }
}

fn exit_for(report: &experiments::ExperimentReport) -> i32 {
    if report.excluded() > 0 {
        println!("excluded {} degenerate repetition(s)", report.excluded());
        EXIT_EXCLUDED
    } else {
        EXIT_OK
    }
}

fn reproduce_table1(common: &CommonArgs, fmt: FloatFormat, seed: u64, reps: usize) -> Result<i32> {
    let mut spec = reference_spike(
        common.d.unwrap_or(5000),
        common.n.unwrap_or(50),
        common.beta.unwrap_or(0.3),
        seed,
        reps,
        common.n_test.unwrap_or(1000),
    );
    spec.estimators = vec![Estimator::Theory];
    let k = spec.m + 1;
    let report = experiments::run_noise_component_table(&spec, k)?;
    let path = out_file(common, "table1.csv");
    write_to(&path, |w| {
        report::write_report_csv(w, &report, fmt, &metadata_for(&spec, &format!("k={k}")))
    })?;
    summarize(&report, "table1");
    println!("wrote {}", path.display());
    Ok(exit_for(&report))
}

fn reproduce_table2(common: &CommonArgs, fmt: FloatFormat, seed: u64, reps: usize) -> Result<i32> {
    let grid: Vec<(usize, usize)> = match (common.d, common.n) {
        (Some(d), Some(n)) => vec![(d, n)],
        (None, None) => vec![(5000, 50), (10_000, 50), (10_000, 100), (20_000, 100)],
        _ => {
            return Err(Error::InvalidSpec(
                "table2 takes either both --d and --n or neither".into(),
            ))
        }
    };
    let estimators = match &common.estimators {
        Some(t) => parse_estimators(t)?,
        None => vec![
            Estimator::Theory,
            Estimator::Best,
            Estimator::Asymptotic,
            Estimator::Jackknife1,
            Estimator::Lzw,
        ],
    };

    struct RowSpec {
        label: String,
        param: String,
        spec: ExperimentSpec,
    }
    let mut configs = Vec::new();
    for beta in [0.3, 0.5] {
        for &(d, n) in &grid {
            let mut spec = reference_spike(d, n, beta, seed, reps, 1);
            spec.estimators = estimators.clone();
            configs.push(RowSpec {
                label: "spike".into(),
                param: format!("beta={beta}"),
                spec,
            });
        }
    }
    for &(d, n) in &grid {
        let mut spec = reference_mixture(d, n, seed, reps, 1);
        spec.estimators = estimators.clone();
        configs.push(RowSpec { label: "mixture".into(), param: "a=0.15".into(), spec });
    }

    let mut lines = Vec::new();
    let col_names = experiments_columns(&estimators);
    lines.push(format!("model,param,d,n,component,{}", col_names.join(",")));
    let mut total_excluded = 0usize;
    for cfg in &configs {
        let report = experiments::run_bias_table(&cfg.spec)?;
        total_excluded += report.excluded();
        let mean = report.mean();
        let sd = report.sd();
        for comp in 1..=cfg.spec.m {
            let mut fields = vec![
                cfg.label.clone(),
                cfg.param.clone(),
                cfg.spec.d.to_string(),
                cfg.spec.n.to_string(),
                comp.to_string(),
            ];
            for est in estimator_order(&estimators) {
                let col = format!("{}_rho_{comp}", est.name());
                let idx = report.columns.iter().position(|c| *c == col).expect("column");
                fields.push(fmt.fmt(mean[idx]));
                if est == Estimator::Theory {
                    fields.push(fmt.fmt(sd[idx]));
                }
            }
            lines.push(fields.join(","));
        }
        println!(
            "{} {} d={} n={}: {} reps, {} excluded",
            cfg.label,
            cfg.param,
            cfg.spec.d,
            cfg.spec.n,
            reps,
            report.excluded()
        );
    }
    let path = out_file(common, "table2.csv");
    let mut text = format!("# reps={reps} master_seed={seed} rng={RNG_ALGORITHM}\n");
    text.push_str(&lines.join("\n"));
    text.push('\n');
    fs::write(&path, text)?;
    println!("wrote {}", path.display());
    if total_excluded > 0 {
        println!("excluded {total_excluded} degenerate repetition(s)");
        Ok(EXIT_EXCLUDED)
    } else {
        Ok(EXIT_OK)
    }
}

fn estimator_order(requested: &[Estimator]) -> Vec<Estimator> {
    let mut list = vec![Estimator::Theory, Estimator::Best];
    for e in Estimator::ALL {
        if requested.contains(&e) && !list.contains(&e) {
            list.push(e);
        }
    }
    list
}

fn experiments_columns(requested: &[Estimator]) -> Vec<String> {
    let mut names = Vec::new();
    for e in estimator_order(requested) {
        names.push(format!("{}_mean", e.name()));
        if e == Estimator::Theory {
            names.push("theory_sd".into());
        }
    }
    names
}

fn reproduce_table3(common: &CommonArgs, fmt: FloatFormat, seed: u64, reps: usize) -> Result<i32> {
    let spec = ExperimentSpec {
        model: ModelSpec::Mixture { a: common.a.unwrap_or(0.15), probs: [0.5, 0.3, 0.2] },
        d: common.d.unwrap_or(5000),
        n: common.n.unwrap_or(100),
        n_test: common.n_test.unwrap_or(100),
        m: 2,
        reps,
        master_seed: seed,
        center: common.center,
        estimators: vec![Estimator::Asymptotic],
    };
    let report = experiments::run_classification_demo(&spec)?;
    let path = out_file(common, "table3.csv");
    write_to(&path, |w| report::write_report_csv(w, &report, fmt, &metadata_for(&spec, "")))?;
    summarize(&report, "table3");
    println!("wrote {}", path.display());
    Ok(exit_for(&report))
}

fn reproduce_score_pairs(
    target: &str,
    common: &CommonArgs,
    fmt: FloatFormat,
    seed: u64,
) -> Result<i32> {
    let spec = ExperimentSpec {
        model: ModelSpec::Spike {
            sigma_sq: vec![0.02, 0.01],
            beta: common.beta.unwrap_or(0.3),
        },
        d: common.d.unwrap_or(10_000),
        n: common.n.unwrap_or(50),
        n_test: common.n_test.unwrap_or(20),
        m: 2,
        reps: 1,
        master_seed: seed,
        center: common.center,
        estimators: vec![Estimator::Asymptotic],
    };
    let table = experiments::run_score_pairs(&spec)?;
    let path = out_file(common, &format!("{target}_pairs.csv"));
    write_to(&path, |w| report::write_score_pairs_csv(w, &table, fmt))?;
    println!(
        "{target}: rho_tilde = ({:.3}, {:.3}), rho_theory = ({:.3}, {:.3})",
        table.factors.rho[0], table.factors.rho[1], table.theory.rho[0], table.theory.rho[1]
    );
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

fn reproduce_fig4(common: &CommonArgs, fmt: FloatFormat, seed: u64, reps: usize) -> Result<i32> {
    let mut spec = reference_spike(
        common.d.unwrap_or(5000),
        common.n.unwrap_or(50),
        common.beta.unwrap_or(0.3),
        seed,
        reps,
        common.n_test.unwrap_or(50),
    );
    spec.estimators = vec![Estimator::Theory, Estimator::Best];
    let scaling = experiments::run_bias_table(&spec)?;
    let corr = experiments::run_correlation_figure(&spec)?;
    let base = out_file(common, "fig4.csv");
    let scaling_path = with_suffix(&base, "_scaling");
    let corr_path = with_suffix(&base, "_correlations");
    write_to(&scaling_path, |w| {
        report::write_report_csv(w, &scaling, fmt, &metadata_for(&spec, "panel=scaling"))
    })?;
    write_to(&corr_path, |w| {
        report::write_report_csv(w, &corr, fmt, &metadata_for(&spec, "panel=correlations"))
    })?;
    summarize(&scaling, "fig4 scaling");
    summarize(&corr, "fig4 correlations");
    println!("wrote {} and {}", scaling_path.display(), corr_path.display());
    if scaling.excluded() + corr.excluded() > 0 {
        Ok(EXIT_EXCLUDED)
    } else {
        Ok(EXIT_OK)
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}

fn write_to<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut std::io::BufWriter<fs::File>) -> Result<()>,
{
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut writer = std::io::BufWriter::new(fs::File::create(path)?);
    body(&mut writer)?;
    writer.flush()?;
    Ok(())
}
