use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::splits::mc_split;
use crate::classifiers::{Classifier, ClassifierConfig, ClassifierKind, Mode, QuantumClassifier};
use crate::data::Dataset;
use crate::ensembles::{
    bagging_fit, boosting_fit, stacking_fit, BaggingConfig, BoostingConfig, StackingConfig, StackingMember,
};
use crate::error::{Error, Result};
use crate::preprocessing::{subsample_majority, NormalizationKind, Normalizer};
use crate::rng::{derive_seed, tag_str};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    None,
    Bagging,
    Boosting,
    Stacking,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 4] = [
        EnsembleKind::None,
        EnsembleKind::Bagging,
        EnsembleKind::Boosting,
        EnsembleKind::Stacking,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::None => "none",
            EnsembleKind::Bagging => "bagging",
            EnsembleKind::Boosting => "boosting",
            EnsembleKind::Stacking => "stacking",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnsembleKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown ensemble {s}")))
    }
}

/// One cell of an experiment grid, repeated over runs and datasets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub ensemble: EnsembleKind,
    /// Base classifier; for stacking, the meta-classifier.
    pub classifier: ClassifierKind,
    /// Input normalization fitted on each training split.
    pub normalization: NormalizationKind,
    pub mode: Mode,
    pub n_internal: usize,
    pub s_samples: usize,
    pub folds: usize,
    /// Single classifier and stacking: subsample the majority class of the
    /// training split. Bagging and boosting: draw `S/2` per class.
    pub balanced: bool,
    /// Stacking only: internals normalize the raw features instead of the
    /// output of the input normalization.
    pub stacking_on_raw: bool,
}

impl RunConfig {
    pub const DEFAULT_N_INTERNAL: usize = 30;
    pub const DEFAULT_S_SAMPLES: usize = 8;

    pub fn single(classifier: ClassifierKind, normalization: NormalizationKind, mode: Mode) -> RunConfig {
        RunConfig {
            ensemble: EnsembleKind::None,
            classifier,
            normalization,
            mode,
            n_internal: RunConfig::DEFAULT_N_INTERNAL,
            s_samples: RunConfig::DEFAULT_S_SAMPLES,
            folds: StackingConfig::DEFAULT_FOLDS,
            balanced: false,
            stacking_on_raw: false,
        }
    }

    pub fn ensemble(
        ensemble: EnsembleKind,
        classifier: ClassifierKind,
        normalization: NormalizationKind,
        mode: Mode,
    ) -> RunConfig {
        let classifier = if ensemble == EnsembleKind::Stacking {
            ClassifierKind::Knn { k: 5 }
        } else {
            classifier
        };
        RunConfig {
            ensemble,
            classifier,
            ..RunConfig::single(classifier, normalization, mode)
        }
    }

    pub fn with_sizes(mut self, n_internal: usize, s_samples: usize) -> RunConfig {
        self.n_internal = n_internal;
        self.s_samples = s_samples;
        self
    }

    pub fn with_balanced(mut self, balanced: bool) -> RunConfig {
        self.balanced = balanced;
        self
    }

    /// `N` as reported in results: absent for a single classifier, the
    /// number of internals for stacking.
    pub fn reported_n_internal(&self) -> Option<usize> {
        match self.ensemble {
            EnsembleKind::None => None,
            EnsembleKind::Stacking => Some(4),
            _ => Some(self.n_internal),
        }
    }

    pub fn reported_s_samples(&self) -> Option<usize> {
        match self.ensemble {
            EnsembleKind::Bagging | EnsembleKind::Boosting => Some(self.s_samples),
            _ => None,
        }
    }

    /// Normalization actually applied to the split before fitting.
    pub fn outer_normalization(&self) -> NormalizationKind {
        if self.ensemble == EnsembleKind::Stacking && self.stacking_on_raw {
            NormalizationKind::None
        } else {
            self.normalization
        }
    }

    /// Canonical description of what is computed, hashed into the
    /// per-configuration seed.
    pub fn key(&self) -> String {
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        format!(
            "ensemble={};classifier={};k={};normalization={};mode={};shots={};n={};s={};folds={};balanced={};raw={}",
            self.ensemble,
            self.classifier.name(),
            opt(self.classifier.k()),
            self.outer_normalization(),
            self.mode.name(),
            self.mode.shots().map_or_else(|| "-".to_string(), |s| s.to_string()),
            opt(self.reported_n_internal()),
            opt(self.reported_s_samples()),
            if self.ensemble == EnsembleKind::Stacking { self.folds.to_string() } else { "-".into() },
            self.balanced,
            self.ensemble == EnsembleKind::Stacking && self.stacking_on_raw,
        )
    }

    /// Fits the configured model on already-normalized training rows.
    pub fn fit(&self, train: &Dataset, seed: u64) -> Result<Box<dyn Classifier>> {
        let base = ClassifierConfig::new(self.classifier).with_mode(self.mode);
        let balance_split = |d: &Dataset| {
            if self.balanced {
                subsample_majority(d, derive_seed(seed, &[0xba1]))
            } else {
                Ok(d.clone())
            }
        };
        Ok(match self.ensemble {
            EnsembleKind::None => {
                let d = balance_split(train)?;
                Box::new(QuantumClassifier::fit(&d.features, &d.labels, base.with_seed(seed))?)
            }
            EnsembleKind::Bagging => Box::new(bagging_fit(
                train,
                &BaggingConfig {
                    base,
                    n_internal: self.n_internal,
                    s_samples: self.s_samples,
                    balanced: self.balanced,
                    seed,
                },
            )?),
            EnsembleKind::Boosting => Box::new(boosting_fit(
                train,
                &BoostingConfig {
                    base,
                    n_internal: self.n_internal,
                    s_samples: self.s_samples,
                    balanced: self.balanced,
                    seed,
                },
            )?),
            EnsembleKind::Stacking => {
                let d = balance_split(train)?;
                let cfg = StackingConfig {
                    meta: StackingMember::new(base, NormalizationKind::None),
                    folds: self.folds,
                    ..StackingConfig::standard(self.mode, seed)
                };
                Box::new(stacking_fit(&d, &cfg)?)
            }
        })
    }
}

/// The full grid: datasets × configurations × runs.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub datasets: Vec<Dataset>,
    pub configs: Vec<RunConfig>,
    pub runs: usize,
    pub train_fraction: f64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Record wall time. Disable for byte-reproducible output.
    pub timing: bool,
}

impl ExperimentSpec {
    pub const DEFAULT_RUNS: usize = 10;
    pub const DEFAULT_TRAIN_FRACTION: f64 = 0.8;

    pub fn new(datasets: Vec<Dataset>, configs: Vec<RunConfig>) -> ExperimentSpec {
        ExperimentSpec {
            datasets,
            configs,
            runs: ExperimentSpec::DEFAULT_RUNS,
            train_fraction: ExperimentSpec::DEFAULT_TRAIN_FRACTION,
            seed: 0,
            threads: None,
            timing: true,
        }
    }
}

/// Outcome of one (dataset, configuration, run) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub dataset: String,
    pub ensemble: EnsembleKind,
    pub classifier: String,
    pub k: Option<usize>,
    pub normalization: NormalizationKind,
    pub mode: String,
    pub shots: Option<u64>,
    pub n_internal: Option<usize>,
    pub s_samples: Option<usize>,
    pub balanced: bool,
    pub run: usize,
    pub seed: u64,
    /// `None` when the run failed.
    pub accuracy: Option<f64>,
    pub correct: u64,
    pub total: u64,
    pub wall_ms: f64,
    pub error: Option<String>,
}

impl ExperimentResult {
    /// Fields identifying the configuration, without dataset and run.
    pub fn config_key(&self) -> (EnsembleKind, &str, Option<usize>, NormalizationKind, &str, Option<u64>, Option<usize>, Option<usize>, bool) {
        (
            self.ensemble,
            &self.classifier,
            self.k,
            self.normalization,
            &self.mode,
            self.shots,
            self.n_internal,
            self.s_samples,
            self.balanced,
        )
    }
}

/// Seed of the split for `run` on `dataset`; shared by all configurations
/// so they are compared on the same partitions.
pub fn split_seed(master: u64, dataset: &str, run: usize) -> u64 {
    derive_seed(master, &[tag_str(dataset), run as u64])
}

pub fn model_seed(master: u64, dataset: &str, run: usize, config: &RunConfig) -> u64 {
    derive_seed(master, &[tag_str(dataset), run as u64, tag_str(&config.key())])
}

fn evaluate(data: &Dataset, config: &RunConfig, run: usize, spec: &ExperimentSpec, seed: u64) -> Result<(u64, u64)> {
    let split = mc_split(data.len(), spec.train_fraction, split_seed(spec.seed, &data.name, run))?;
    let train = data.subset(&split.train);
    let validation = data.subset(&split.validation);
    let normalizer = Normalizer::fit(config.outer_normalization(), &train.features)?;
    let train = train.with_features(normalizer.apply(&train.features, false)?);
    let rows = normalizer.apply(&validation.features, true)?;

    let model = config.fit(&train, seed)?;
    let correct = model
        .predict_all(&rows)?
        .iter()
        .zip(&validation.labels)
        .filter(|(p, y)| p.label == **y)
        .count();
    Ok((correct as u64, validation.len() as u64))
}

fn run_cell(spec: &ExperimentSpec, d: usize, c: usize, run: usize) -> ExperimentResult {
    let data = &spec.datasets[d];
    let config = &spec.configs[c];
    let seed = model_seed(spec.seed, &data.name, run, config);
    let start = Instant::now();
    let outcome = evaluate(data, config, run, spec, seed);
    let wall_ms = if spec.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    let (accuracy, correct, total, error) = match outcome {
        Ok((correct, total)) => (Some(correct as f64 / total as f64), correct, total, None),
        Err(e) => {
            log::warn!("{} run {run} ({}) failed: {e}", data.name, config.key());
            (None, 0, 0, Some(e.to_string()))
        }
    };
    ExperimentResult {
        dataset: data.name.clone(),
        ensemble: config.ensemble,
        classifier: config.classifier.name().to_string(),
        k: config.classifier.k(),
        normalization: config.normalization,
        mode: config.mode.name().to_string(),
        shots: config.mode.shots(),
        n_internal: config.reported_n_internal(),
        s_samples: config.reported_s_samples(),
        balanced: config.balanced,
        run,
        seed,
        accuracy,
        correct,
        total,
        wall_ms,
        error,
    }
}

/// Runs every cell in parallel. Output order is dataset, then
/// configuration, then run, whatever the thread count. Failing cells are
/// recorded with an error instead of aborting the sweep.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentResult>> {
    if spec.runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    if spec.datasets.is_empty() || spec.configs.is_empty() {
        return Err(Error::InvalidParameter("experiment has no datasets or no configurations".into()));
    }
    let cells: Vec<(usize, usize, usize)> = (0..spec.datasets.len())
        .flat_map(|d| (0..spec.configs.len()).flat_map(move |c| (0..spec.runs).map(move |r| (d, c, r))))
        .collect();
    let work = || -> Vec<ExperimentResult> {
        cells
            .par_iter()
            .map(|&(d, c, r)| run_cell(spec, d, c, r))
            .collect()
    };
    match spec.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

/// Base configurations of a benchmark sweep: for every ensemble other than
/// stacking, every base classifier and normalization; stacking once per
/// normalization.
pub fn sweep_configs(
    ensembles: &[EnsembleKind],
    classifiers: &[ClassifierKind],
    normalizations: &[NormalizationKind],
    mode: Mode,
) -> Vec<RunConfig> {
    let mut out = Vec::new();
    for &e in ensembles {
        for &n in normalizations {
            if e == EnsembleKind::Stacking {
                out.push(RunConfig::ensemble(e, ClassifierKind::Knn { k: 5 }, n, mode));
            } else {
                out.extend(classifiers.iter().map(|&c| RunConfig::ensemble(e, c, n, mode)));
            }
        }
    }
    out
}

/// Bagging grid over `N` and `S` values.
pub fn grid_configs(base: &[RunConfig], n_values: &[usize], s_values: &[usize]) -> Vec<RunConfig> {
    base.iter()
        .flat_map(|b| {
            n_values
                .iter()
                .flat_map(move |&n| s_values.iter().map(move |&s| b.with_sizes(n, s)))
        })
        .collect()
}

pub const GRID_N: [usize; 4] = [5, 10, 30, 50];
pub const GRID_S: [usize; 4] = [6, 8, 10, 20];
