use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::affinity::{
    affinity_to_graph, combine, symmetrize, AffinityFn, AffinityMatrix, CombinationParams, DegreeMode, Symmetrization,
};
use crate::community::{detect, Algorithm, DetectConfig, LouvainConfig, Partition, PathMetric};
use crate::graph::WeightedGraph;
use crate::metrics::{modularity, nmi};

use super::datasets::{builtin_dataset_in, data_dir, DatasetBundle};
use super::ExperimentError;

/// Which graph a modularity value is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricTarget {
    /// The affinity network the algorithm ran on.
    #[default]
    Affinity,
    /// The original adjacency graph.
    Adjacency,
}

impl FromStr for MetricTarget {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "affinity" => Ok(MetricTarget::Affinity),
            "adjacency" => Ok(MetricTarget::Adjacency),
            other => Err(ExperimentError::Config(format!(
                "target must be affinity or adjacency, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for MetricTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricTarget::Affinity => "affinity",
            MetricTarget::Adjacency => "adjacency",
        })
    }
}

/// Ranking used by [`best_records`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Nmi,
    Modularity(MetricTarget),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub datasets: Vec<String>,
    pub algorithms: Vec<Algorithm>,
    pub pair: (AffinityFn, AffinityFn),
    pub step: f64,
    pub sym: Symmetrization,
    pub target: MetricTarget,
    pub seed: u64,
    /// Worker threads; `None` uses every available core.
    pub jobs: Option<usize>,
    pub degree: DegreeMode,
    pub path_metric: PathMetric,
    /// Affinity values at or below this are not edges.
    pub threshold: f64,
    /// Record wall-clock runtimes. Off by default so output is reproducible.
    pub timing: bool,
    /// Where file-based datasets live; `None` uses [`data_dir`].
    pub data_dir: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            datasets: vec!["zachary".into()],
            algorithms: Algorithm::ALL.to_vec(),
            pair: (AffinityFn::BestFriend, AffinityFn::BestCommonFriend),
            step: 0.05,
            sym: Symmetrization::Mean,
            target: MetricTarget::Affinity,
            seed: 42,
            jobs: None,
            degree: DegreeMode::Degree,
            path_metric: PathMetric::InverseWeight,
            threshold: 0.0,
            timing: false,
            data_dir: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.datasets.is_empty() {
            return Err(ExperimentError::Config("no datasets selected".into()));
        }
        if self.algorithms.is_empty() {
            return Err(ExperimentError::Config("no algorithms selected".into()));
        }
        if self.jobs == Some(0) {
            return Err(ExperimentError::Config("jobs must be at least 1".into()));
        }
        if !(self.threshold.is_finite() && self.threshold >= 0.0) {
            return Err(ExperimentError::Config(format!(
                "threshold must be a non-negative number, got {}",
                self.threshold
            )));
        }
        admissible_grid(self.step).map(|_| ())
    }

    pub fn detect_config(&self) -> DetectConfig {
        DetectConfig {
            louvain: LouvainConfig::with_seed(self.seed),
            path_metric: self.path_metric,
        }
    }
}

/// One algorithm run on one dataset at one grid point (or on the raw graph,
/// in which case `alpha` and `beta` are absent).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub provenance: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub k_found: usize,
    pub modularity_affinity: f64,
    pub modularity_adjacency: f64,
    pub nmi: f64,
    pub runtime_ms: Option<f64>,
}

impl SweepRecord {
    pub fn modularity(&self, target: MetricTarget) -> f64 {
        match target {
            MetricTarget::Affinity => self.modularity_affinity,
            MetricTarget::Adjacency => self.modularity_adjacency,
        }
    }

    fn score(&self, criterion: Criterion) -> f64 {
        match criterion {
            Criterion::Nmi => self.nmi,
            Criterion::Modularity(target) => self.modularity(target),
        }
    }
}

/// Snaps `i * step` onto a 1e-12 grid so that e.g. `3 * 0.05` prints and
/// compares as `0.15`.
fn lattice(i: usize, step: f64) -> f64 {
    ((i as f64 * step) * 1e12).round() / 1e12
}

/// Every `(alpha, beta)` with both a multiple of `step` in `[0, 1]` and
/// `0 < alpha + beta <= 1`, ordered by alpha then beta.
pub fn admissible_grid(step: f64) -> Result<Vec<(f64, f64)>, ExperimentError> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(ExperimentError::Config(format!("grid step must lie in (0, 1], got {step}")));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    let mut grid = Vec::new();
    for i in 0..=count {
        for j in 0..=count {
            let (alpha, beta) = (lattice(i, step), lattice(j, step));
            if i + j > 0 && CombinationParams::new(alpha, beta).is_ok() {
                grid.push((alpha, beta));
            }
        }
    }
    if grid.is_empty() {
        return Err(ExperimentError::Config(format!("grid step {step} admits no (alpha, beta) point")));
    }
    Ok(grid)
}

fn evaluate(
    d: &DatasetBundle,
    on: &WeightedGraph,
    algorithm: Algorithm,
    cfg: &DetectConfig,
    timing: bool,
) -> Result<(Partition, f64, f64, f64, Option<f64>), ExperimentError> {
    let start = Instant::now();
    let p = detect(on, algorithm, cfg)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let q_on = modularity(on, &p)?;
    let q_adj = modularity(&d.graph, &p)?;
    let score = nmi(&p, &Partition::from(&d.labels))?;
    Ok((p, q_on, q_adj, score, timing.then_some(elapsed)))
}

/// Runs each algorithm on the dataset's own graph.
pub fn run_baseline(
    d: &DatasetBundle,
    algorithms: &[Algorithm],
    cfg: &DetectConfig,
    timing: bool,
) -> Result<Vec<SweepRecord>, ExperimentError> {
    algorithms
        .iter()
        .map(|&algorithm| {
            let (p, q, q_adj, score, runtime_ms) = evaluate(d, &d.graph, algorithm, cfg, timing)?;
            Ok(SweepRecord {
                dataset: d.name.clone(),
                algorithm,
                provenance: "adjacency".into(),
                alpha: None,
                beta: None,
                k_found: p.k(),
                modularity_affinity: q,
                modularity_adjacency: q_adj,
                nmi: score,
                runtime_ms,
            })
        })
        .collect()
}

/// Loads the configured datasets and sweeps them; see [`run_sweep_on`].
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>, ExperimentError> {
    cfg.validate()?;
    let bundles = load_datasets(cfg)?;
    run_sweep_on(&bundles, cfg)
}

pub fn load_datasets(cfg: &SweepConfig) -> Result<Vec<DatasetBundle>, ExperimentError> {
    let dir = cfg.data_dir.clone().unwrap_or_else(data_dir);
    cfg.datasets.iter().map(|name| builtin_dataset_in(name, &dir)).collect()
}

struct Operands {
    first: AffinityMatrix,
    second: AffinityMatrix,
}

/// For every admissible grid point and dataset: combine the affinity pair,
/// symmetrize, threshold into a graph and run every algorithm on it. Output
/// is sorted by (dataset, algorithm, alpha, beta) and does not depend on the
/// number of worker threads.
pub fn run_sweep_on(bundles: &[DatasetBundle], cfg: &SweepConfig) -> Result<Vec<SweepRecord>, ExperimentError> {
    cfg.validate()?;
    let grid = admissible_grid(cfg.step)?;
    let operands: Vec<Operands> = bundles
        .iter()
        .map(|d| Operands {
            first: cfg.pair.0.compute(&d.graph, cfg.degree),
            second: cfg.pair.1.compute(&d.graph, cfg.degree),
        })
        .collect();
    let tasks: Vec<(usize, (f64, f64))> = (0..bundles.len())
        .flat_map(|d| grid.iter().map(move |&point| (d, point)))
        .collect();
    let detect_cfg = cfg.detect_config();

    let work = || -> Result<Vec<SweepRecord>, ExperimentError> {
        let chunks = tasks
            .par_iter()
            .map(|&(d, (alpha, beta))| {
                let bundle = &bundles[d];
                let ops = &operands[d];
                let params = CombinationParams::new(alpha, beta)?;
                let affinity = symmetrize(&combine(&ops.first, &ops.second, params)?, cfg.sym);
                let provenance = affinity.provenance().to_string();
                let g = affinity_to_graph(&affinity, &bundle.graph, cfg.threshold)?;
                cfg.algorithms
                    .iter()
                    .map(|&algorithm| {
                        let (p, q, q_adj, score, runtime_ms) = evaluate(bundle, &g, algorithm, &detect_cfg, cfg.timing)
                            .map_err(|e| e.at_point(&bundle.name, algorithm, alpha, beta))?;
                        Ok(SweepRecord {
                            dataset: bundle.name.clone(),
                            algorithm,
                            provenance: provenance.clone(),
                            alpha: Some(alpha),
                            beta: Some(beta),
                            k_found: p.k(),
                            modularity_affinity: q,
                            modularity_adjacency: q_adj,
                            nmi: score,
                            runtime_ms,
                        })
                    })
                    .collect::<Result<Vec<_>, ExperimentError>>()
            })
            .collect::<Result<Vec<_>, ExperimentError>>()?;
        Ok(chunks.into_iter().flatten().collect())
    };

    let mut records = match cfg.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| ExperimentError::Config(format!("cannot start worker pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    sort_records(&mut records);
    Ok(records)
}

pub fn sort_records(records: &mut [SweepRecord]) {
    records.sort_by(|a, b| {
        a.dataset
            .cmp(&b.dataset)
            .then(a.algorithm.cmp(&b.algorithm))
            .then(a.alpha.unwrap_or(0.0).total_cmp(&b.alpha.unwrap_or(0.0)))
            .then(a.beta.unwrap_or(0.0).total_cmp(&b.beta.unwrap_or(0.0)))
    });
}

/// Best record per (dataset, algorithm) under `criterion`; ties go to the
/// smaller `alpha + beta`, then the smaller `alpha`.
pub fn best_records(records: &[SweepRecord], criterion: Criterion) -> Result<Vec<SweepRecord>, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::Empty);
    }
    let mut best: BTreeMap<(&str, Algorithm), &SweepRecord> = BTreeMap::new();
    for r in records {
        let key = (r.dataset.as_str(), r.algorithm);
        match best.get(&key) {
            Some(current) if !beats(r, current, criterion) => {}
            _ => {
                best.insert(key, r);
            }
        }
    }
    Ok(best.into_values().cloned().collect())
}

fn beats(a: &SweepRecord, b: &SweepRecord, criterion: Criterion) -> bool {
    let (sa, sb) = (a.score(criterion), b.score(criterion));
    if sa != sb {
        return sa > sb;
    }
    let (aa, ab) = (a.alpha.unwrap_or(0.0), a.beta.unwrap_or(0.0));
    let (ba, bb) = (b.alpha.unwrap_or(0.0), b.beta.unwrap_or(0.0));
    if aa + ab != ba + bb {
        return aa + ab < ba + bb;
    }
    aa < ba
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::datasets::zachary;

    #[test]
    fn grid_quarter_step() {
        let grid = admissible_grid(0.25).unwrap();
        assert_eq!(grid.len(), 14);
        assert!(grid.iter().all(|&(a, b)| a + b > 0.0 && a + b <= 1.0 + 1e-12));
        assert!(grid.contains(&(1.0, 0.0)));
        assert!(grid.contains(&(0.25, 0.75)));
        assert!(!grid.contains(&(0.5, 0.75)));
    }

    #[test]
    fn grid_values_are_snapped() {
        let grid = admissible_grid(0.05).unwrap();
        assert_eq!(grid.len(), 230);
        assert!(grid.contains(&(0.15, 0.85)));
        assert!(grid.contains(&(0.7, 0.3)));
    }

    #[test]
    fn grid_rejects_bad_steps() {
        for step in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(admissible_grid(step).is_err(), "{step}");
        }
        assert_eq!(admissible_grid(1.0).unwrap(), vec![(0.0, 1.0), (1.0, 0.0)]);
        assert_eq!(admissible_grid(0.6).unwrap().len(), 2);
    }

    #[test]
    fn sweep_is_complete_and_sorted() {
        let cfg = SweepConfig {
            step: 0.5,
            jobs: Some(2),
            ..Default::default()
        };
        let records = run_sweep_on(&[zachary()], &cfg).unwrap();
        assert_eq!(records.len(), 5 * 3);
        for r in &records {
            assert!((-1.0..1.0).contains(&r.modularity_affinity));
            assert!((0.0..=1.0).contains(&r.nmi));
            assert!(r.runtime_ms.is_none());
        }
        let mut sorted = records.clone();
        sort_records(&mut sorted);
        assert_eq!(sorted, records);
    }

    #[test]
    fn baseline_has_adjacency_provenance() {
        let d = zachary();
        let records = run_baseline(&d, &Algorithm::ALL, &DetectConfig::default(), false).unwrap();
        assert_eq!(records.len(), 3);
        for r in records {
            assert_eq!(r.provenance, "adjacency");
            assert_eq!(r.modularity_affinity, r.modularity_adjacency);
            assert!(r.alpha.is_none() && r.beta.is_none());
        }
    }

    fn record(alpha: f64, beta: f64, q: f64) -> SweepRecord {
        SweepRecord {
            dataset: "d".into(),
            algorithm: Algorithm::Louvain,
            provenance: String::new(),
            alpha: Some(alpha),
            beta: Some(beta),
            k_found: 2,
            modularity_affinity: q,
            modularity_adjacency: q,
            nmi: 0.5,
            runtime_ms: None,
        }
    }

    #[test]
    fn best_record_tie_breaks() {
        let c = Criterion::Modularity(MetricTarget::Affinity);
        let single = vec![record(0.5, 0.5, 0.1)];
        assert_eq!(best_records(&single, c).unwrap(), single);
        let rs = vec![record(0.5, 0.5, 0.3), record(0.6, 0.2, 0.3), record(0.2, 0.6, 0.3), record(0.1, 0.1, 0.2)];
        let best = best_records(&rs, c).unwrap();
        assert_eq!(best, vec![record(0.2, 0.6, 0.3)]);
        assert!(matches!(best_records(&[], c), Err(ExperimentError::Empty)));
    }
}
