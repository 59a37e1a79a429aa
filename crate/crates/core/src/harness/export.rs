use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::experiment::{EnsembleKind, ExperimentResult};
use super::stats::{mean, median};
use crate::error::{Error, Result};
use crate::preprocessing::NormalizationKind;

pub const RESULT_COLUMNS: [&str; 13] = [
    "dataset",
    "ensemble",
    "classifier",
    "k",
    "normalization",
    "mode",
    "shots",
    "n_internal",
    "s_samples",
    "run",
    "seed",
    "accuracy",
    "wall_ms",
];

pub const SUMMARY_COLUMNS: [&str; 13] = [
    "scope",
    "ensemble",
    "classifier",
    "k",
    "normalization",
    "mode",
    "shots",
    "n_internal",
    "s_samples",
    "runs",
    "failures",
    "median",
    "mean",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other}"))),
        }
    }
}

/// Median and mean accuracy of one box: a configuration on one dataset, or
/// on all datasets pooled (`scope = "all"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub scope: String,
    pub ensemble: EnsembleKind,
    pub classifier: String,
    pub k: Option<usize>,
    pub normalization: NormalizationKind,
    pub mode: String,
    pub shots: Option<u64>,
    pub n_internal: Option<usize>,
    pub s_samples: Option<usize>,
    pub balanced: bool,
    pub runs: usize,
    pub failures: usize,
    pub median: Option<f64>,
    pub mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsFile {
    pub results: Vec<ExperimentResult>,
    pub aggregates: Vec<Aggregate>,
}

/// Per-dataset boxes followed by pooled boxes, each in order of first
/// appearance.
pub fn aggregate(results: &[ExperimentResult]) -> Vec<Aggregate> {
    let mut per_dataset: Vec<(String, Vec<&ExperimentResult>)> = Vec::new();
    let mut pooled: Vec<(String, Vec<&ExperimentResult>)> = Vec::new();
    let mut index: HashMap<(String, String), usize> = HashMap::new();
    let mut pooled_index: HashMap<String, usize> = HashMap::new();
    for r in results {
        let key = format!("{:?}", r.config_key());
        let slot = *index.entry((r.dataset.clone(), key.clone())).or_insert_with(|| {
            per_dataset.push((r.dataset.clone(), Vec::new()));
            per_dataset.len() - 1
        });
        per_dataset[slot].1.push(r);
        let slot = *pooled_index.entry(key).or_insert_with(|| {
            pooled.push(("all".to_string(), Vec::new()));
            pooled.len() - 1
        });
        pooled[slot].1.push(r);
    }
    per_dataset
        .into_iter()
        .chain(pooled)
        .map(|(scope, group)| {
            let first = group[0];
            let acc: Vec<f64> = group.iter().filter_map(|r| r.accuracy).collect();
            Aggregate {
                scope,
                ensemble: first.ensemble,
                classifier: first.classifier.clone(),
                k: first.k,
                normalization: first.normalization,
                mode: first.mode.clone(),
                shots: first.shots,
                n_internal: first.n_internal,
                s_samples: first.s_samples,
                balanced: first.balanced,
                runs: group.len(),
                failures: group.len() - acc.len(),
                median: (!acc.is_empty()).then(|| median(&acc)),
                mean: (!acc.is_empty()).then(|| mean(&acc)),
            }
        })
        .collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn fixed6(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| format!("{v:.6}"))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_results_csv(results: &[ExperimentResult], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_COLUMNS).map_err(csv_error)?;
    for r in results {
        w.write_record([
            r.dataset.clone(),
            r.ensemble.to_string(),
            r.classifier.clone(),
            opt(r.k),
            r.normalization.to_string(),
            r.mode.clone(),
            opt(r.shots),
            opt(r.n_internal),
            opt(r.s_samples),
            r.run.to_string(),
            r.seed.to_string(),
            fixed6(r.accuracy),
            format!("{:.3}", r.wall_ms),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv(aggregates: &[Aggregate], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_COLUMNS).map_err(csv_error)?;
    for a in aggregates {
        w.write_record([
            a.scope.clone(),
            a.ensemble.to_string(),
            a.classifier.clone(),
            opt(a.k),
            a.normalization.to_string(),
            a.mode.clone(),
            opt(a.shots),
            opt(a.n_internal),
            opt(a.s_samples),
            a.runs.to_string(),
            a.failures.to_string(),
            fixed6(a.median),
            fixed6(a.mean),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// `dir/stem_summary.csv` next to `path`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    path.with_file_name(format!("{stem}_summary.csv"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes the records and their aggregates.
///
/// CSV: the records to `path` and the aggregates to [`summary_path`].
/// JSON: one object holding both, with full float precision.
pub fn export_results(results: &[ExperimentResult], path: &Path, format: Format) -> Result<()> {
    if results.is_empty() {
        return Err(Error::InvalidParameter("no results to export".into()));
    }
    let aggregates = aggregate(results);
    match format {
        Format::Csv => {
            write_results_csv(results, create(path)?)?;
            write_summary_csv(&aggregates, create(&summary_path(path))?)
        }
        Format::Json => {
            let file = ResultsFile {
                results: results.to_vec(),
                aggregates,
            };
            let mut out = create(path)?;
            serde_json::to_writer_pretty(&mut out, &file).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn read_results_json(path: &Path) -> Result<ResultsFile> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| Error::Io(e.to_string()))
}
