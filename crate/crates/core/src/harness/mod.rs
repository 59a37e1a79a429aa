//! Dataset loading, Monte Carlo cross-validation and result export.
//!
//! Every (dataset, configuration, run) cell is independent and seeded from
//! the master seed, the dataset name, the run index and a hash of the
//! configuration, so results do not depend on scheduling.

mod dataset;
mod experiment;
mod export;
mod splits;
pub mod stats;
mod sweep;

pub use dataset::{load_dataset, read_dataset};
pub use experiment::{
    grid_configs, model_seed, run_experiment, split_seed, sweep_configs, EnsembleKind, ExperimentResult,
    ExperimentSpec, RunConfig, GRID_N, GRID_S,
};
pub use export::{
    aggregate, export_results, read_results_json, summary_path, write_results_csv, write_summary_csv, Aggregate,
    Format, ResultsFile, RESULT_COLUMNS, SUMMARY_COLUMNS,
};
pub use splits::{mc_split, mc_splits, Split};
pub use sweep::{pool, shots_grid, shots_sweep, write_shots_csv, ShotsPoint, CI_LEVEL};
