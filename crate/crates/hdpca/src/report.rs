//! CSV export and import.
//!
//! Dialect: comma separator, `.` decimal point, LF line endings, and
//! `#`-prefixed metadata lines. Floats carry 9 significant digits by
//! default and 17 (round-trip exact) in full-precision mode.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::bias::BiasFactors;
use crate::error::{Error, Result};
use crate::experiments::{ExperimentReport, ScorePairsTable};
use crate::numerics::{DataMatrix, Matrix};
use crate::pca::ScoreMatrix;
use crate::procrustes::ProcrustesFit;
use crate::simulate::Dataset;

/// Float formatting policy.
#[derive(Debug, Clone, Copy)]
pub struct FloatFormat {
    pub full_precision: bool,
}

impl FloatFormat {
    pub fn new(full_precision: bool) -> Self {
        FloatFormat { full_precision }
    }

    pub fn fmt(&self, v: f64) -> String {
        if self.full_precision {
            format!("{v:.16e}")
        } else {
            format!("{v:.8e}")
        }
    }
}

/// Data matrix: one observation per column, no header. Line r holds the
/// rth variable across observations.
pub fn write_matrix_csv<W: Write>(out: &mut W, m: &Matrix, fmt: FloatFormat) -> Result<()> {
    let mut line = String::new();
    for r in 0..m.rows() {
        line.clear();
        for c in 0..m.cols() {
            if c > 0 {
                line.push(',');
            }
            line.push_str(&fmt.fmt(m.get(r, c)));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Read a data matrix written by [`write_matrix_csv`]. `#` lines are
/// skipped; ragged rows are reported with their 1-based line number.
pub fn read_matrix_csv<R: BufRead>(input: R) -> Result<DataMatrix> {
    let mut values: Vec<f64> = Vec::new();
    let mut rows = 0usize;
    let mut cols = 0usize;
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut count = 0usize;
        for field in trimmed.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| Error::ParseError {
                line: idx + 1,
                detail: format!("cannot parse {:?} as a number", field.trim()),
            })?;
            values.push(v);
            count += 1;
        }
        if rows == 0 {
            cols = count;
        } else if count != cols {
            return Err(Error::ParseError {
                line: idx + 1,
                detail: format!("expected {cols} fields, found {count}"),
            });
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::ParseError { line: 0, detail: "no data rows".into() });
    }
    // Stored row-major while reading; data matrices are column-major.
    let mut col_major = vec![0.0f64; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            col_major[c * rows + r] = values[r * cols + c];
        }
    }
    DataMatrix::from_column_major(rows, cols, col_major)
}

/// Score matrix: `#` metadata sidecar, `comp_1,…,comp_m` header, one
/// observation per row.
pub fn write_scores_csv<W: Write>(
    out: &mut W,
    scores: &ScoreMatrix,
    fmt: FloatFormat,
    metadata: &str,
) -> Result<()> {
    writeln!(out, "# kind={} comps={} cols={}{}", scores.kind(), scores.comps(), scores.cols(),
        if metadata.is_empty() { String::new() } else { format!(" {metadata}") })?;
    let header: Vec<String> = (1..=scores.comps()).map(|i| format!("comp_{i}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for j in 0..scores.cols() {
        let row: Vec<String> = (0..scores.comps()).map(|i| fmt.fmt(scores.get(i, j))).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Bias factors: one row `provenance,rho_1,…,rho_m`.
pub fn write_bias_factors_csv<W: Write>(
    out: &mut W,
    factors: &BiasFactors,
    fmt: FloatFormat,
) -> Result<()> {
    let header: Vec<String> =
        (1..=factors.rho.len()).map(|i| format!("rho_{i}")).collect();
    writeln!(out, "provenance,{}", header.join(","))?;
    let row: Vec<String> = factors.rho.iter().map(|v| fmt.fmt(*v)).collect();
    writeln!(out, "{},{}", factors.provenance, row.join(","))?;
    Ok(())
}

/// Square rotation matrix, plain rows.
pub fn write_rotation_csv<W: Write>(out: &mut W, rotation: &Matrix, fmt: FloatFormat) -> Result<()> {
    for r in 0..rotation.rows() {
        let row: Vec<String> = (0..rotation.cols()).map(|c| fmt.fmt(rotation.get(r, c))).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Procrustes fit summary: `theta,scale_1,…,scale_m,objective,iters`.
pub fn write_procrustes_csv<W: Write>(
    out: &mut W,
    fit: &ProcrustesFit,
    fmt: FloatFormat,
) -> Result<()> {
    let scales: Vec<String> = (1..=fit.scale.len()).map(|i| format!("scale_{i}")).collect();
    writeln!(out, "theta,{},objective,iters", scales.join(","))?;
    let theta = fit.theta.map(|t| fmt.fmt(t)).unwrap_or_default();
    let row: Vec<String> = fit.scale.iter().map(|v| fmt.fmt(*v)).collect();
    writeln!(out, "{theta},{},{},{}", row.join(","), fmt.fmt(fit.objective), fit.iters)?;
    Ok(())
}

/// Experiment report: metadata comments, a header row, per-repetition rows
/// (flagged repetitions appear as comments), then the aggregate block after
/// a `# aggregate` marker.
pub fn write_report_csv<W: Write>(
    out: &mut W,
    report: &ExperimentReport,
    fmt: FloatFormat,
    metadata: &[String],
) -> Result<()> {
    for line in metadata {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "rep,seed,{}", report.columns.join(","))?;
    for row in &report.rows {
        match &row.flag {
            None => {
                let mut line = format!("{},{}", row.rep, row.seed);
                for v in &row.values {
                    let _ = write!(line, ",{}", fmt.fmt(*v));
                }
                writeln!(out, "{line}")?;
            }
            Some(reason) => {
                writeln!(out, "# excluded rep={} seed={} reason={reason}", row.rep, row.seed)?;
            }
        }
    }
    writeln!(out, "# excluded_reps={}", report.excluded())?;
    writeln!(out, "# aggregate")?;
    let mean: Vec<String> = report.mean().iter().map(|v| fmt.fmt(*v)).collect();
    let sd: Vec<String> = report.sd().iter().map(|v| fmt.fmt(*v)).collect();
    writeln!(out, "mean,,{}", mean.join(","))?;
    writeln!(out, "sd,,{}", sd.join(","))?;
    Ok(())
}

/// Long-format score pairs for external plotting.
pub fn write_score_pairs_csv<W: Write>(
    out: &mut W,
    table: &ScorePairsTable,
    fmt: FloatFormat,
) -> Result<()> {
    writeln!(
        out,
        "# seed={} adjust_rho_1={} adjust_rho_2={} theory_rho_1={} theory_rho_2={}",
        table.seed,
        fmt.fmt(table.factors.rho[0]),
        fmt.fmt(table.factors.rho[1]),
        fmt.fmt(table.theory.rho[0]),
        fmt.fmt(table.theory.rho[1]),
    )?;
    writeln!(out, "set,index,true_1,true_2,score_1,score_2,adjusted_1,adjusted_2")?;
    for row in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.set,
            row.index,
            fmt.fmt(row.true_scores[0]),
            fmt.fmt(row.true_scores[1]),
            fmt.fmt(row.scores[0]),
            fmt.fmt(row.scores[1]),
            fmt.fmt(row.adjusted[0]),
            fmt.fmt(row.adjusted[1]),
        )?;
    }
    Ok(())
}

/// Oracle sidecar files: one CSV per field, each with a one-line header
/// naming the field. Returns (file name, contents) pairs.
pub fn oracle_files(ds: &Dataset, fmt: FloatFormat) -> Vec<(String, String)> {
    let mut files = Vec::new();
    let matrix_body = |m: &Matrix| -> String {
        let mut s = String::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if c > 0 {
                    s.push(',');
                }
                s.push_str(&fmt.fmt(m.get(r, c)));
            }
            s.push('\n');
        }
        s
    };
    files.push((
        "oracle_directions.csv".into(),
        format!("directions\n{}", matrix_body(&ds.oracle.directions)),
    ));
    files.push((
        "oracle_sigma_sq.csv".into(),
        format!(
            "sigma_sq\n{}\n",
            ds.oracle.sigma_sq.iter().map(|v| fmt.fmt(*v)).collect::<Vec<_>>().join(",")
        ),
    ));
    files.push((
        "oracle_tau_sq.csv".into(),
        format!("tau_sq\n{}\n", fmt.fmt(ds.oracle.tau_sq)),
    ));
    files.push((
        "oracle_true_scores.csv".into(),
        format!("true_scores\n{}", matrix_body(&ds.oracle.true_scores)),
    ));
    files.push((
        "oracle_scaled_scores.csv".into(),
        format!("scaled_scores\n{}", matrix_body(&ds.oracle.scaled_scores)),
    ));
    files.push((
        "oracle_test_scores.csv".into(),
        format!("test_true_scores\n{}", matrix_body(&ds.oracle_test.true_scores)),
    ));
    if let Some(labels) = &ds.oracle.labels {
        files.push((
            "oracle_labels.csv".into(),
            format!(
                "labels\n{}\n",
                labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
            ),
        ));
    }
    if let Some(labels) = &ds.oracle_test.labels {
        files.push((
            "oracle_test_labels.csv".into(),
            format!(
                "test_labels\n{}\n",
                labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
            ),
        ));
    }
    files
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sample_gaussian, SeededRng};

    #[test]
    fn matrix_round_trip_full_precision() {
        let x = sample_gaussian(&SeededRng::new(1, 0), 7, 4).unwrap();
        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, x.as_matrix(), FloatFormat::new(true)).unwrap();
        let back = read_matrix_csv(buf.as_slice()).unwrap();
        assert_eq!(back.as_matrix().data(), x.as_matrix().data());
    }

    #[test]
    fn ragged_row_reports_line() {
        let text = "1.0,2.0\n3.0\n";
        match read_matrix_csv(text.as_bytes()) {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_number_reports_line() {
        let text = "# comment\n1.0,2.0\n3.0,oops\n";
        match read_matrix_csv(text.as_bytes()) {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn factor_and_fit_exports_have_stable_headers() {
        let factors = crate::bias::BiasFactors {
            rho: vec![1.5, 2.0],
            rotation: None,
            provenance: crate::bias::Provenance::Jackknife1,
        };
        let mut buf = Vec::new();
        write_bias_factors_csv(&mut buf, &factors, FloatFormat::new(false)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("provenance,rho_1,rho_2\njackknife1,"));

        let fit = crate::procrustes::ProcrustesFit {
            scale: vec![1.4, 1.8],
            rotation: Matrix::identity(2),
            objective: 0.25,
            iters: 3,
            theta: Some(0.1),
            objective_trace: vec![1.0, 0.5, 0.25],
        };
        let mut buf = Vec::new();
        write_procrustes_csv(&mut buf, &fit, FloatFormat::new(false)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "theta,scale_1,scale_2,objective,iters");
        assert!(lines.next().unwrap().ends_with(",3"));
    }

    #[test]
    fn default_precision_has_nine_significant_digits() {
        let fmt = FloatFormat::new(false);
        assert_eq!(fmt.fmt(1.0 / 3.0), "3.33333333e-1");
        let full = FloatFormat::new(true);
        let v: f64 = 0.1 + 0.2;
        let parsed: f64 = full.fmt(v).parse().unwrap();
        assert_eq!(parsed.to_bits(), v.to_bits());
    }
}
