//! Benchmark datasets, `(alpha, beta)` parameter sweeps over affinity
//! networks, and CSV / markdown reports.

mod datasets;
mod report;
mod sweep;

use std::path::PathBuf;

use thiserror::Error;

use crate::affinity::AffinityError;
use crate::community::{Algorithm, CommunityError};
use crate::graph::GraphError;
use crate::metrics::MetricError;

pub use datasets::{builtin_dataset, builtin_dataset_in, data_dir, zachary, DatasetBundle, DATASET_NAMES, DATA_DIR_VAR};
pub use report::{write_report, ReportFormat, CSV_HEADER};
pub use sweep::{
    admissible_grid, best_records, load_datasets, run_baseline, run_sweep, run_sweep_on, sort_records, Criterion,
    MetricTarget, SweepConfig, SweepRecord,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown dataset {name:?}; valid names: {valid}")]
    UnknownDataset { name: String, valid: String },
    #[error("dataset {name}: {} not found; {hint}", path.display())]
    MissingData { name: String, path: PathBuf, hint: String },
    #[error("dataset {name} has no ground-truth labels: {hint}")]
    MissingLabels { name: String, hint: String },
    #[error("{0}")]
    Config(String),
    #[error("no records")]
    Empty,
    #[error("{dataset}/{algorithm} at alpha={alpha}, beta={beta}: {source}")]
    AtPoint {
        dataset: String,
        algorithm: Algorithm,
        alpha: f64,
        beta: f64,
        source: Box<ExperimentError>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Affinity(#[from] AffinityError),
    #[error(transparent)]
    Community(#[from] CommunityError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    fn at_point(self, dataset: &str, algorithm: Algorithm, alpha: f64, beta: f64) -> Self {
        ExperimentError::AtPoint {
            dataset: dataset.to_owned(),
            algorithm,
            alpha,
            beta,
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping grid-point context.
    pub fn root(&self) -> &ExperimentError {
        match self {
            ExperimentError::AtPoint { source, .. } => source.root(),
            other => other,
        }
    }
}
