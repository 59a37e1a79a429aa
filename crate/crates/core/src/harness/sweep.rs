use serde::{Deserialize, Serialize};
use std::io::Write;

use super::experiment::{run_experiment, EnsembleKind, ExperimentResult, ExperimentSpec, RunConfig};
use super::stats::clopper_pearson;
use crate::classifiers::Mode;
use crate::error::{Error, Result};

/// Powers of two from 1024 to 262144.
pub fn shots_grid() -> Vec<u64> {
    (10..=18).map(|p| 1u64 << p).collect()
}

/// Mean accuracy of one configuration at one shot count, pooled over runs
/// and datasets, with an exact Binomial interval on the pooled
/// correct/total count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotsPoint {
    pub ensemble: EnsembleKind,
    pub classifier: String,
    /// `None` for statevector evaluation.
    pub shots: Option<u64>,
    pub runs: usize,
    pub correct: u64,
    pub total: u64,
    pub accuracy: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub const CI_LEVEL: f64 = 0.95;

/// Pools successful records into one point.
pub fn pool(results: &[&ExperimentResult]) -> Result<ShotsPoint> {
    let first = results.first().ok_or_else(|| Error::InvalidParameter("empty group".into()))?;
    let ok: Vec<_> = results.iter().filter(|r| r.error.is_none()).collect();
    let correct: u64 = ok.iter().map(|r| r.correct).sum();
    let total: u64 = ok.iter().map(|r| r.total).sum();
    let (ci_low, ci_high) = clopper_pearson(correct, total, CI_LEVEL)?;
    Ok(ShotsPoint {
        ensemble: first.ensemble,
        classifier: first.classifier.clone(),
        shots: first.shots,
        runs: ok.len(),
        correct,
        total,
        accuracy: correct as f64 / total as f64,
        ci_low,
        ci_high,
    })
}

/// Evaluates every base configuration in statevector mode and at every shot
/// count. Splits are shared across shot counts.
pub fn shots_sweep(
    mut spec: ExperimentSpec,
    base: &[RunConfig],
    shots: &[u64],
) -> Result<Vec<ShotsPoint>> {
    let mut configs = Vec::new();
    for b in base {
        configs.push(RunConfig {
            mode: Mode::Statevector,
            ..*b
        });
        configs.extend(shots.iter().map(|&s| RunConfig {
            mode: Mode::Sampled { shots: s },
            ..*b
        }));
    }
    spec.configs = configs.clone();
    let results = run_experiment(&spec)?;
    configs
        .iter()
        .enumerate()
        .map(|(c, cfg)| {
            let group: Vec<&ExperimentResult> = results
                .iter()
                .filter(|r| r.ensemble == cfg.ensemble && r.shots == cfg.mode.shots() && r.classifier == cfg.classifier.name())
                .collect();
            debug_assert_eq!(group.len(), spec.runs * spec.datasets.len(), "config {c}");
            pool(&group)
        })
        .collect()
}

pub fn write_shots_csv(points: &[ShotsPoint], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["ensemble", "classifier", "mode", "shots", "runs", "correct", "total", "accuracy", "ci_low", "ci_high"])
        .map_err(err)?;
    for p in points {
        w.write_record([
            p.ensemble.to_string(),
            p.classifier.clone(),
            if p.shots.is_some() { "sampled" } else { "statevector" }.to_string(),
            p.shots.map_or_else(String::new, |s| s.to_string()),
            p.runs.to_string(),
            p.correct.to_string(),
            p.total.to_string(),
            format!("{:.6}", p.accuracy),
            format!("{:.6}", p.ci_low),
            format!("{:.6}", p.ci_high),
        ])
        .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}
