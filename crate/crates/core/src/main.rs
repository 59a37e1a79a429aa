use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qensemble::harness::{
    aggregate, export_results, grid_configs, load_dataset, run_experiment, shots_grid, shots_sweep, sweep_configs,
    Aggregate, EnsembleKind, ExperimentResult, ExperimentSpec, Format, RunConfig, ShotsPoint, GRID_N, GRID_S,
};
use qensemble::{ClassifierKind, Dataset, Mode, NormalizationKind, Normalizer};

#[derive(Parser)]
#[command(name = "qensemble", version, about = "Ensembles of simulated quantum classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one classifier or ensemble on one dataset, or classify a point.
    Predict {
        #[command(flatten)]
        opts: Opts,
        /// Comma-separated feature row; the model is fitted on the whole dataset.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Option<Vec<f64>>,
    },
    /// Every ensemble × classifier × normalization (restricted by the filters given).
    Benchmark(Opts),
    /// Ensemble sizes N ∈ {5,10,30,50} × S ∈ {6,8,10,20}.
    GridSearch(Opts),
    /// Accuracy against shot count, 1024 to 262144, with Binomial 95% intervals.
    ShotsSweep(Opts),
    /// Unbalanced against class-balanced training sets.
    BalanceStudy(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifierArg {
    Cosine,
    Distance,
    Knn,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    None,
    Bagging,
    Boosting,
    Stacking,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    None,
    Std,
    Minmax,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Statevector,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Opts {
    /// Dataset CSV, or a directory of them. Repeatable.
    #[arg(long, required = true)]
    dataset: Vec<PathBuf>,
    #[arg(long, value_enum)]
    classifier: Option<ClassifierArg>,
    /// Neighbours for the k-NN classifier.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, value_enum)]
    ensemble: Option<EnsembleArg>,
    #[arg(long, value_enum)]
    normalization: Option<NormalizationArg>,
    #[arg(long, value_enum, default_value = "statevector")]
    mode: ModeArg,
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    #[arg(long, default_value_t = RunConfig::DEFAULT_N_INTERNAL)]
    n_internal: usize,
    #[arg(long, default_value_t = RunConfig::DEFAULT_S_SAMPLES)]
    s_samples: usize,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = ExperimentSpec::DEFAULT_RUNS)]
    runs: usize,
    #[arg(long, default_value_t = ExperimentSpec::DEFAULT_TRAIN_FRACTION)]
    train_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Class-balanced training sets.
    #[arg(long)]
    balanced: bool,
    /// Stacking internals normalize raw features instead of the normalized input.
    #[arg(long)]
    stacking_on_raw: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    threads: Option<usize>,
    /// Write wall_ms as 0 so result files are byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

impl Opts {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Statevector => Mode::Statevector,
            ModeArg::Sampled => Mode::Sampled { shots: self.shots },
        }
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }

    fn classifiers(&self, default: &[ClassifierArg]) -> Vec<ClassifierKind> {
        let to_kind = |c: &ClassifierArg| match c {
            ClassifierArg::Cosine => ClassifierKind::Cosine,
            ClassifierArg::Distance => ClassifierKind::Distance,
            ClassifierArg::Knn => ClassifierKind::Knn { k: self.k },
        };
        match &self.classifier {
            Some(c) => vec![to_kind(c)],
            None => default.iter().map(to_kind).collect(),
        }
    }

    fn ensembles(&self, default: &[EnsembleKind]) -> Vec<EnsembleKind> {
        match self.ensemble {
            Some(EnsembleArg::None) => vec![EnsembleKind::None],
            Some(EnsembleArg::Bagging) => vec![EnsembleKind::Bagging],
            Some(EnsembleArg::Boosting) => vec![EnsembleKind::Boosting],
            Some(EnsembleArg::Stacking) => vec![EnsembleKind::Stacking],
            None => default.to_vec(),
        }
    }

    fn normalizations(&self, default: &[NormalizationKind]) -> Vec<NormalizationKind> {
        match self.normalization {
            Some(NormalizationArg::None) => vec![NormalizationKind::None],
            Some(NormalizationArg::Std) => vec![NormalizationKind::Std],
            Some(NormalizationArg::Minmax) => vec![NormalizationKind::MinMax],
            None => default.to_vec(),
        }
    }

    /// Applies the size, fold and balancing flags to generated configurations.
    fn finish(&self, configs: Vec<RunConfig>) -> Vec<RunConfig> {
        configs
            .into_iter()
            .map(|c| RunConfig {
                folds: self.folds,
                balanced: self.balanced,
                stacking_on_raw: self.stacking_on_raw,
                ..c.with_sizes(self.n_internal, self.s_samples)
            })
            .collect()
    }

    fn datasets(&self) -> Result<Vec<Dataset>> {
        let mut paths = Vec::new();
        for p in &self.dataset {
            if p.is_dir() {
                let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                    .with_context(|| format!("reading {}", p.display()))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|e| e.extension().is_some_and(|x| x == "csv"))
                    .collect();
                found.sort();
                paths.extend(found);
            } else {
                paths.push(p.clone());
            }
        }
        if paths.is_empty() {
            bail!("no dataset files found");
        }
        paths
            .iter()
            .map(|p| load_dataset(p).with_context(|| format!("loading {}", p.display())))
            .collect()
    }

    fn spec(&self, configs: Vec<RunConfig>) -> Result<ExperimentSpec> {
        Ok(ExperimentSpec {
            runs: self.runs,
            train_fraction: self.train_fraction,
            seed: self.seed,
            threads: self.threads,
            timing: !self.no_timing,
            ..ExperimentSpec::new(self.datasets()?, configs)
        })
    }
}

const ALL_CLASSIFIERS: [ClassifierArg; 3] = [ClassifierArg::Cosine, ClassifierArg::Distance, ClassifierArg::Knn];
const VOTING: [EnsembleKind; 3] = [EnsembleKind::None, EnsembleKind::Bagging, EnsembleKind::Boosting];

fn print_summary(aggregates: &[Aggregate]) {
    println!(
        "{:<10} {:<10} {:<3} {:<7} {:<12} {:>7} {:>4} {:>4} {:>5} {:>8} {:>8}",
        "ensemble", "classifier", "k", "norm", "mode", "shots", "N", "S", "runs", "median", "mean"
    );
    let o = |v: Option<usize>| v.map_or_else(|| "-".into(), |v| v.to_string());
    let f = |v: Option<f64>| v.map_or_else(|| "-".into(), |v| format!("{v:.4}"));
    for a in aggregates.iter().filter(|a| a.scope == "all") {
        println!(
            "{:<10} {:<10} {:<3} {:<7} {:<12} {:>7} {:>4} {:>4} {:>5} {:>8} {:>8}",
            a.ensemble.to_string(),
            a.classifier,
            o(a.k),
            a.normalization.to_string(),
            a.mode,
            a.shots.map_or_else(|| "-".into(), |s| s.to_string()),
            o(a.n_internal),
            o(a.s_samples),
            a.runs - a.failures,
            f(a.median),
            f(a.mean)
        );
    }
}

fn emit(results: &[ExperimentResult], out: Option<&Path>, format: Format) -> Result<()> {
    let failures = results.iter().filter(|r| r.error.is_some()).count();
    if failures > 0 {
        eprintln!("{failures} of {} runs failed; see the log for details", results.len());
    }
    print_summary(&aggregate(results));
    if let Some(path) = out {
        export_results(results, path, format).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

fn predict(opts: &Opts, x: Option<&[f64]>) -> Result<()> {
    let kind = opts.classifiers(&[ClassifierArg::Cosine])[0];
    let ensemble = opts.ensembles(&[EnsembleKind::None])[0];
    let normalization = opts.normalizations(&[NormalizationKind::None])[0];
    let config = opts.finish(vec![RunConfig::ensemble(ensemble, kind, normalization, opts.mode())])[0];
    match x {
        Some(x) => {
            let datasets = opts.datasets()?;
            if datasets.len() != 1 {
                bail!("--x needs exactly one dataset");
            }
            let data = &datasets[0];
            let normalizer = Normalizer::fit(config.normalization, &data.features)?;
            let train = data.with_features(normalizer.apply(&data.features, false)?);
            let model = config.fit(&train, opts.seed)?;
            let p = model.predict(&normalizer.apply_row(x, true)?)?;
            println!("label={} confidence={:.6} decision_value={:.6}", p.label, p.confidence, p.decision_value);
            Ok(())
        }
        None => {
            let spec = opts.spec(vec![config])?;
            let results = run_experiment(&spec)?;
            for r in &results {
                match (r.accuracy, &r.error) {
                    (Some(a), _) => println!("{} run {}: accuracy {a:.6}", r.dataset, r.run),
                    (None, Some(e)) => println!("{} run {}: failed: {e}", r.dataset, r.run),
                    (None, None) => {}
                }
            }
            emit(&results, opts.out.as_deref(), opts.format())
        }
    }
}

fn write_shots(points: &[ShotsPoint], out: Option<&Path>, format: Format) -> Result<()> {
    println!(
        "{:<10} {:<10} {:>7} {:>6} {:>9} {:>9} {:>9}",
        "ensemble", "classifier", "shots", "runs", "accuracy", "ci_low", "ci_high"
    );
    for p in points {
        println!(
            "{:<10} {:<10} {:>7} {:>6} {:>9.4} {:>9.4} {:>9.4}",
            p.ensemble.to_string(),
            p.classifier,
            p.shots.map_or_else(|| "exact".into(), |s| s.to_string()),
            p.runs,
            p.accuracy,
            p.ci_low,
            p.ci_high
        );
    }
    if let Some(path) = out {
        let file = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        match format {
            Format::Csv => qensemble::harness::write_shots_csv(points, file)?,
            Format::Json => serde_json::to_writer_pretty(file, points)?,
        }
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Predict { opts, x } => predict(&opts, x.as_deref()),
        Command::Benchmark(opts) => {
            let configs = sweep_configs(
                &opts.ensembles(&EnsembleKind::ALL),
                &opts.classifiers(&ALL_CLASSIFIERS),
                &opts.normalizations(&NormalizationKind::ALL),
                opts.mode(),
            );
            let results = run_experiment(&opts.spec(opts.finish(configs))?)?;
            emit(&results, opts.out.as_deref(), opts.format())
        }
        Command::GridSearch(opts) => {
            let ensembles = opts.ensembles(&[EnsembleKind::Bagging]);
            if ensembles.iter().any(|e| matches!(e, EnsembleKind::None | EnsembleKind::Stacking)) {
                bail!("grid search applies to bagging or boosting");
            }
            let base = opts.finish(sweep_configs(
                &ensembles,
                &opts.classifiers(&ALL_CLASSIFIERS),
                &opts.normalizations(&NormalizationKind::ALL),
                opts.mode(),
            ));
            let results = run_experiment(&opts.spec(grid_configs(&base, &GRID_N, &GRID_S))?)?;
            emit(&results, opts.out.as_deref(), opts.format())
        }
        Command::ShotsSweep(opts) => {
            let base = opts.finish(sweep_configs(
                &opts.ensembles(&VOTING),
                &opts.classifiers(&[ClassifierArg::Distance]),
                &opts.normalizations(&[NormalizationKind::MinMax]),
                Mode::Statevector,
            ));
            let points = shots_sweep(opts.spec(Vec::new())?, &base, &shots_grid())?;
            write_shots(&points, opts.out.as_deref(), opts.format())
        }
        Command::BalanceStudy(opts) => {
            let base = sweep_configs(
                &opts.ensembles(&VOTING),
                &opts.classifiers(&[ClassifierArg::Distance]),
                &opts.normalizations(&NormalizationKind::ALL),
                opts.mode(),
            );
            for balanced in [false, true] {
                let configs: Vec<RunConfig> = opts
                    .finish(base.clone())
                    .into_iter()
                    .map(|c| c.with_balanced(balanced))
                    .collect();
                let label = if balanced { "balanced" } else { "unbalanced" };
                println!("== {label} ==");
                let results = run_experiment(&opts.spec(configs)?)?;
                let out = opts.out.as_deref().map(|p| with_suffix(p, label));
                emit(&results, out.as_deref(), opts.format())?;
            }
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    run(Cli::parse())
}
